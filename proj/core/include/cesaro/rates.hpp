#pragma once

#include <cstdint>
#include <string>

#include "cesaro/magnitude.hpp"
#include "cesaro/modulus.hpp"
#include "cesaro/rademacher.hpp"

namespace cesaro {

/// The outputs of the rate pipeline: from (eps, b, eta, q, C_q) to the
/// index threshold N past which every Cesaro-mean residual is <= eps.
/// p_tilde, p and n_threshold are integer-valued; everything downstream of
/// delta can carry stacked exponents.
struct RatePlan {
  double eps = 0.0;
  double b = 0.0;
  double q = 0.0;
  double C_q = 0.0;
  LeveledMagnitude p_tilde;
  LeveledMagnitude delta;    // xi^{p_tilde}(eps/9)
  LeveledMagnitude p;        // ceil(2b / delta^2)
  LeveledMagnitude alpha;    // just under min(xi^{p-1}(delta^2/2), eps/3)
  LeveledMagnitude n_threshold;  // ceil(b / alpha)
};

/// xi(t) = (t/12) * eta(min(2, t/b)); strictly below t/12.
double shrink_xi(const ModulusSpec& m, double b, double t);
LeveledMagnitude shrink_xi(const ModulusSpec& m, double b,
                           const LeveledMagnitude& t);

/// k-fold iterate of xi starting at t0. Moduli with a power-law small-eps
/// branch (power forms, constant tables, hilbert) go through the closed
/// affine recurrence in log space after at most a bounded number of
/// explicit leading steps, so k may carry stacked exponents; other tables
/// iterate explicitly and require k to be a native integer.
LeveledMagnitude iterate_xi(const ModulusSpec& m, double b,
                            const LeveledMagnitude& t0,
                            const LeveledMagnitude& k);

/// Reference path: k explicit steps in the log domain. Used for
/// cross-checking the closed recurrence.
LeveledMagnitude iterate_xi_explicit(const ModulusSpec& m, double b,
                                     const LeveledMagnitude& t0,
                                     std::uint64_t k);

/// Least integer with 2 C_q n^{(1-q)/q} <= eps/(9b); minimality is
/// certified against the original inequality whenever the value is small
/// enough to test directly.
LeveledMagnitude p_tilde_bound(double eps, double b, double q, double C_q);

RatePlan rate_plan(double eps, double b, const ModulusSpec& m, double q,
                   double C_q);
RatePlan rate_plan(double eps, double b, const ModulusSpec& m,
                   const RademacherProfile& profile);

/// Hilbert-space quadratic rate: least n with diam/sqrt(n) <= eps.
long long hilbert_rate(double eps, double diam);

std::string render(const RatePlan& plan);
std::string rate_plan_csv_header();
std::string rate_plan_csv_row(const RatePlan& plan);

}  // namespace cesaro
