#include "cesaro/rademacher.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cesaro {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

double constraint_lhs(double xi) {
  return (1.0 - xi) / (1.0 + 2.0 * std::sqrt(2.0 * xi));
}

}  // namespace

double delta_from_modulus(const ModulusSpec& m) {
  double d = m.eta(1.0);
  if (!(d > 0.0) || d > 1.0) fail("delta_from_modulus: eta(1) outside (0, 1]");
  return d;
}

double mu2_bound(double lambda) {
  if (!(lambda >= 0.0) || lambda >= 1.0)
    fail("mu2_bound: lambda must lie in [0, 1)");
  return 0.5 * std::sqrt(2.0 * lambda * lambda + 2.0);
}

double solve_xi(double mu2) {
  if (!(mu2 > 0.0) || mu2 >= 1.0) fail("solve_xi: mu2 must lie in (0, 1)");
  double lo = 0.0, hi = 1.0;  // constraint_lhs(lo) >= mu2 throughout
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (constraint_lhs(mid) >= mu2 ? lo : hi) = mid;
  }
  return lo;
}

double min_p_prime(double xi) {
  if (!(xi > 0.0) || xi >= 1.0) fail("min_p_prime: xi must lie in (0, 1)");
  double p = std::max(2.0, -1.0 / std::log2(1.0 - xi));
  while (std::pow(2.0, -1.0 / p) < 1.0 - xi) p *= 1.0 + 1e-15;
  return p;
}

double kahane_constant(double q) {
  if (!(q > 1.0)) fail("kahane_constant: q must exceed 1");
  return std::pow((2.0 * q - 1.0) / (q - 1.0), q - 1.0);
}

double convert_constant(double value, TypeConstant from, TypeConstant to) {
  if (value < 0.0) fail("convert_constant: negative constant");
  if (from == TypeConstant::q_moment && to == TypeConstant::second_moment)
    return 3.0 * value;  // K_2 = 3
  return value;
}

RademacherProfile rademacher_profile(double delta, double theta) {
  if (!(delta > 0.0) || delta >= 1.0)
    fail("rademacher_profile: delta must lie in (0, 1)");
  if (!(theta > 0.0) || theta >= 1.0)
    fail("rademacher_profile: theta must lie in (0, 1)");

  RademacherProfile r;
  r.delta = delta;
  r.theta = theta;
  r.lambda = 1.0 - delta;
  r.mu2_bound = mu2_bound(r.lambda);
  r.xi_prob = solve_xi(r.mu2_bound);
  r.p_prime = min_p_prime(r.xi_prob);
  r.p_conj = r.p_prime / (r.p_prime - 1.0);
  r.q = 1.0 + theta * (r.p_conj - 1.0);
  if (!(r.q > 1.0) || r.q > 2.0)
    fail("rademacher_profile: extracted q left (1, 2]");
  r.C_q = 3.0 * std::pow(2.0, 1.0 / r.q) /
          (std::pow(2.0, 1.0 / r.q - 1.0 / r.p_conj) - 1.0);
  r.K_q = kahane_constant(r.q);
  r.c_q = convert_constant(r.C_q, TypeConstant::q_moment,
                           TypeConstant::second_moment);
  r.sum_constant = 2.0 * r.C_q;
  if (!profile_constraints_hold(r))
    throw std::logic_error("rademacher_profile: emitted profile fails its own constraints");
  return r;
}

bool profile_constraints_hold(const RademacherProfile& r) {
  if (!(constraint_lhs(r.xi_prob) >= r.mu2_bound)) return false;
  if (!(std::pow(2.0, -1.0 / r.p_prime) >= 1.0 - r.xi_prob)) return false;
  if (std::abs(1.0 / r.p_conj + 1.0 / r.p_prime - 1.0) > 1e-12) return false;
  return 1.0 < r.q && r.q < r.p_conj && r.C_q >= 1.0;
}

std::string render(const RademacherProfile& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "delta=%.17g\n"
                "lambda=%.17g\n"
                "mu2_bound=%.17g\n"
                "xi=%.17g\n"
                "p_prime=%.17g\n"
                "p=%.17g\n"
                "theta=%.17g\n"
                "q=%.17g\n"
                "C_q=%.17g\n"
                "K_q=%.17g\n"
                "c_q=%.17g\n"
                "sum_constant=%.17g\n",
                r.delta, r.lambda, r.mu2_bound, r.xi_prob, r.p_prime, r.p_conj,
                r.theta, r.q, r.C_q, r.K_q, r.c_q, r.sum_constant);
  return buf;
}

}  // namespace cesaro
