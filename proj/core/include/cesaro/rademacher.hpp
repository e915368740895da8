#pragma once

#include <string>

#include "cesaro/modulus.hpp"

namespace cesaro {

/// Everything extracted from a nonsquareness witness delta: the second
/// moment bound, the admissible (xi, p') pair, the conjugate exponent p,
/// the Rademacher type q with its constant C_q, and the companions K_q,
/// c_q (second-moment form) and 2*C_q (independent mean-zero sums).
struct RademacherProfile {
  double delta = 0.0;
  double lambda = 0.0;        // 1 - delta
  double mu2_bound = 0.0;     // (1/2) sqrt(2 lambda^2 + 2)
  double xi_prob = 0.0;       // maximal xi with (1-xi)/(1+2 sqrt(2 xi)) >= mu2
  double p_prime = 0.0;       // minimal p' >= 2 with 2^(-1/p') >= 1 - xi
  double p_conj = 0.0;        // 1/p + 1/p' = 1
  double q = 0.0;             // 1 + theta (p - 1)
  double C_q = 0.0;           // 3 * 2^(1/q) / (2^(1/q - 1/p) - 1)
  double K_q = 0.0;           // ((2q-1)/(q-1))^(q-1)
  double c_q = 0.0;           // K_2 * C_q = 3 C_q
  double sum_constant = 0.0;  // 2 C_q
  double theta = 0.5;
};

/// delta := eta(1). Rejects values outside (0, 1]; any genuine modulus
/// yields eta(1) <= 1/2.
double delta_from_modulus(const ModulusSpec& m);

/// (1/2) sqrt(2 lambda^2 + 2) for lambda in [0, 1); at least sqrt(2)/2,
/// below 1. Rejects lambda >= 1 (the bound degenerates to 1).
double mu2_bound(double lambda);

/// Maximal xi in (0,1) with (1-xi)/(1+2 sqrt(2 xi)) >= mu2, by bisection
/// on the strictly decreasing left side; the returned value satisfies the
/// constraint exactly in float arithmetic (rounded toward smaller xi).
double solve_xi(double mu2);

/// Least admissible p': max(2, -1/log2(1-xi)), nudged upward until
/// 2^(-1/p') >= 1-xi holds exactly in float arithmetic.
double min_p_prime(double xi);

/// ((2q-1)/(q-1))^(q-1) for q > 1; K_2 = 3.
double kahane_constant(double q);

enum class TypeConstant {
  q_moment,       // constant for the q-th moment inequality
  second_moment,  // constant for the second-moment variant
};

/// Converting the q-moment constant to the second-moment form multiplies
/// by K_2 = 3; the reverse direction keeps the constant.
double convert_constant(double value, TypeConstant from, TypeConstant to);

/// Full extraction chain from delta in (0,1). theta in (0,1) places
/// q = 1 + theta (p-1) inside the admissible interval (1, p).
RademacherProfile rademacher_profile(double delta, double theta = 0.5);

/// Exact float re-substitution of both extraction constraints plus the
/// conjugacy and ordering invariants.
bool profile_constraints_hold(const RademacherProfile& profile);

/// key=value lines, one per field.
std::string render(const RademacherProfile& profile);

}  // namespace cesaro
