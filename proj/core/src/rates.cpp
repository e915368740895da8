#include "cesaro/rates.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cesaro {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn12 = 2.4849066497880004;

SignedMagnitude ln_of(const LeveledMagnitude& x) {
  return scale(log10(x), M_LN10);
}

LeveledMagnitude exp_ln(const SignedMagnitude& l) {
  return exp10(scale(l, 1.0 / M_LN10));
}

// n - c for an integer-valued magnitude; exact at level 0, absorbed above.
LeveledMagnitude subtract_count(const LeveledMagnitude& n, std::uint64_t c) {
  if (c == 0) return n;
  SignedMagnitude r = add(SignedMagnitude::positive(n),
                          SignedMagnitude::from_double(-static_cast<double>(c)));
  if (r.sign < 0) throw std::logic_error("subtract_count: went negative");
  return r.mag;
}

std::uint64_t native_count(const LeveledMagnitude& k) {
  return static_cast<std::uint64_t>(k.mantissa() + 0.5);
}

// One xi step on ln t.
double ln_xi_step(const ModulusSpec& m, double ln_b, double l) {
  return l - kLn12 + m.ln_eta(std::min(kLn2, l - ln_b));
}

// Closed affine recurrence L_{j+1} = lnA + (1+s) L_j inside the power
// branch, solved for k steps at once.
LeveledMagnitude closed_form(const PowerBranch& br, double b,
                             const SignedMagnitude& l0,
                             const LeveledMagnitude& k) {
  double ln_a = std::log(br.c) - kLn12 - br.s * std::log(b);
  if (br.s == 0.0)
    return exp_ln(add(l0, scale(SignedMagnitude::positive(k), ln_a)));
  double l_star = -ln_a / br.s;  // repelling fixed point of the recurrence
  SignedMagnitude depth = add(SignedMagnitude::from_double(l_star), -l0);
  if (depth.sign <= 0)
    throw std::logic_error("iterate_xi: start point outside the contraction branch");
  SignedMagnitude ln_gd = add(
      scale(SignedMagnitude::positive(k), std::log1p(br.s)), ln_of(depth.mag));
  SignedMagnitude l_k =
      add(SignedMagnitude::from_double(l_star), {-1, exp_ln(ln_gd)});
  return exp_ln(l_k);
}

}  // namespace

double shrink_xi(const ModulusSpec& m, double b, double t) {
  if (!(b > 0.0)) throw std::invalid_argument("shrink_xi: b must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("shrink_xi: t must be > 0");
  return t / 12.0 * m.eta(std::min(2.0, t / b));
}

LeveledMagnitude shrink_xi(const ModulusSpec& m, double b,
                           const LeveledMagnitude& t) {
  if (!(b > 0.0)) throw std::invalid_argument("shrink_xi: b must be > 0");
  if (t.is_zero()) throw std::invalid_argument("shrink_xi: t must be > 0");
  SignedMagnitude l = ln_of(t);
  if (l.fits_double())
    return exp_ln(
        SignedMagnitude::from_double(ln_xi_step(m, std::log(b), l.to_double())));
  if (l.sign > 0) {  // argument clamps at 2; constant eta(2) step
    double step = -kLn12 + m.ln_eta(kLn2);
    return exp_ln(add(l, SignedMagnitude::from_double(step)));
  }
  auto br = m.small_eps_branch();
  if (!br)
    throw ModulusError(
        "shrink_xi: values below the log window need a power-form modulus");
  double ln_a = std::log(br->c) - kLn12 - br->s * std::log(b);
  return exp_ln(add(scale(l, 1.0 + br->s), SignedMagnitude::from_double(ln_a)));
}

LeveledMagnitude iterate_xi_explicit(const ModulusSpec& m, double b,
                                     const LeveledMagnitude& t0,
                                     std::uint64_t k) {
  if (!(b > 0.0)) throw std::invalid_argument("iterate_xi: b must be > 0");
  if (t0.is_zero()) throw std::invalid_argument("iterate_xi: t0 must be > 0");
  SignedMagnitude l0 = ln_of(t0);
  if (!l0.fits_double())
    throw MagnitudeError("iterate_xi_explicit: ln t0 exceeds the double range");
  double l = l0.to_double(), ln_b = std::log(b);
  for (std::uint64_t j = 0; j < k; ++j) {
    l = ln_xi_step(m, ln_b, l);
    if (!std::isfinite(l))
      throw MagnitudeError(
          "iterate_xi_explicit: the running logarithm left the double "
          "range; use the closed-form path");
  }
  return exp_ln(SignedMagnitude::from_double(l));
}

LeveledMagnitude iterate_xi(const ModulusSpec& m, double b,
                            const LeveledMagnitude& t0,
                            const LeveledMagnitude& k) {
  if (!(b > 0.0)) throw std::invalid_argument("iterate_xi: b must be > 0");
  if (t0.is_zero()) throw std::invalid_argument("iterate_xi: t0 must be > 0");
  if (k.is_zero()) return t0;
  if (k.branch() == Branch::tiny)
    throw std::invalid_argument("iterate_xi: k must be a nonnegative integer");

  const bool k_native = k.level() == 0;
  auto br = m.small_eps_branch();
  if (!br) {
    if (!k_native)
      throw ModulusError(
          "iterate_xi: a non-constant table modulus has no closed-form "
          "branch; iteration counts beyond native integers need a "
          "power-form modulus");
    return iterate_xi_explicit(m, b, t0, native_count(k));
  }

  SignedMagnitude l0 = ln_of(t0);
  LeveledMagnitude remaining = k;
  if (!l0.fits_double()) {
    if (l0.sign > 0)
      throw MagnitudeError(
          "iterate_xi: start value too large to cross into the modulus "
          "branch exactly");
    return closed_form(*br, b, l0, remaining);
  }

  double l = l0.to_double();
  double ln_b = std::log(b);
  double ln_2b = std::log(2.0 * b);

  // Above 2b the eta argument clamps: exact geometric decay, consumed in
  // one shot.
  if (l > ln_2b) {
    double step = kLn12 - m.ln_eta(kLn2);
    double cross = std::ceil((l - ln_2b) / step);
    if (cross > 1e9)
      throw MagnitudeError(
          "iterate_xi: crossing count from this start value exceeds the "
          "exactly countable range");
    if (k_native && static_cast<double>(native_count(k)) < cross) {
      l -= static_cast<double>(native_count(k)) * step;
      return exp_ln(SignedMagnitude::from_double(l));
    }
    l -= cross * step;
    remaining = subtract_count(remaining, static_cast<std::uint64_t>(cross));
  }

  // Mid region: explicit steps until the power branch applies. Each step
  // shrinks by at least a factor 12, so this loop is short.
  double entry_l = std::isinf(br->eps_limit)
                       ? std::numeric_limits<double>::infinity()
                       : std::log(br->eps_limit) + ln_b;
  long guard = 0;
  while (!remaining.is_zero() && l > entry_l) {
    l = ln_xi_step(m, ln_b, l);
    remaining = subtract_count(remaining, 1);
    if (++guard > 2000000)
      throw std::logic_error("iterate_xi: branch entry did not converge");
  }
  if (remaining.is_zero()) return exp_ln(SignedMagnitude::from_double(l));
  return closed_form(*br, b, SignedMagnitude::from_double(l), remaining);
}

LeveledMagnitude p_tilde_bound(double eps, double b, double q, double C_q) {
  if (!(eps > 0.0) || !(b > 0.0))
    throw std::invalid_argument("p_tilde_bound: eps and b must be > 0");
  if (!(q > 1.0) || q > 2.0)
    throw std::invalid_argument("p_tilde_bound: q must lie in (1, 2]");
  if (!(C_q >= 1.0))
    throw std::invalid_argument("p_tilde_bound: C_q must be >= 1");

  double base = 18.0 * b * C_q / eps;
  if (base <= 1.0) return LeveledMagnitude::one();
  double exponent = q / (q - 1.0);
  double lg = exponent * std::log10(base);
  auto holds = [&](double n) {
    return 2.0 * C_q * std::pow(n, (1.0 - q) / q) <= eps / (9.0 * b);
  };
  if (lg < 15.0) {
    double n = std::ceil(std::pow(base, exponent));
    while (n > 1.0 && holds(n - 1.0)) n -= 1.0;
    while (!holds(n)) n += 1.0;
    return LeveledMagnitude::from_double(n);
  }
  return ceil_int(exp10(SignedMagnitude::from_double(lg)));
}

namespace {

void check_plan(const RatePlan& plan) {
  // (a) the p_tilde defining inequality, in the log domain. p_tilde == 1
  // has log 0 and carries no sign; skip the scale term then. A 1e-9 slack
  // absorbs the rounding disagreement between this route and the linear
  // float route that certified minimality.
  SignedMagnitude lhs = SignedMagnitude::from_double(std::log10(2.0 * plan.C_q));
  if (compare(plan.p_tilde, LeveledMagnitude::one()) !=
      std::strong_ordering::equal)
    lhs = add(lhs, scale(log10(plan.p_tilde), (1.0 - plan.q) / plan.q));
  SignedMagnitude rhs =
      SignedMagnitude::from_double(std::log10(plan.eps / (9.0 * plan.b)));
  bool ok;
  if (lhs.fits_double() && rhs.fits_double()) {
    double l = lhs.to_double(), r = rhs.to_double();
    ok = l <= r + 1e-9 * std::max({1.0, std::abs(l), std::abs(r)});
  } else {
    ok = compare(lhs, rhs) != std::strong_ordering::greater;
  }
  if (!ok)
    throw std::logic_error("rate_plan: p_tilde fails its defining inequality");
  // (b) p >= 2b/delta^2
  LeveledMagnitude need = LeveledMagnitude::from_double(2.0 * plan.b) *
                          reciprocal(pow(plan.delta, 2.0));
  if (compare(plan.p, need) == std::strong_ordering::less)
    throw std::logic_error("rate_plan: p < 2b/delta^2");
  // (c) alpha below both caps (strictness is built in by the 1 - 2^-20
  // margin; at stacked-exponent levels the margin is below representational
  // precision, so equality of representations is accepted)
  LeveledMagnitude eps3 = LeveledMagnitude::from_double(plan.eps / 3.0);
  if (compare(plan.alpha, eps3) == std::strong_ordering::greater)
    throw std::logic_error("rate_plan: alpha above eps/3");
  if (plan.alpha.level() == 0 && eps3.level() == 0 &&
      plan.alpha.mantissa() >= eps3.mantissa())
    throw std::logic_error("rate_plan: alpha not strictly below eps/3");
  if (plan.alpha.is_zero()) throw std::logic_error("rate_plan: alpha underflow");
  // (d) N >= b/alpha
  LeveledMagnitude quota =
      LeveledMagnitude::from_double(plan.b) * reciprocal(plan.alpha);
  if (compare(plan.n_threshold, quota) == std::strong_ordering::less)
    throw std::logic_error("rate_plan: N < b/alpha");
}

}  // namespace

RatePlan rate_plan(double eps, double b, const ModulusSpec& m, double q,
                   double C_q) {
  if (!(eps > 0.0) || !(b > 0.0))
    throw std::invalid_argument("rate_plan: eps and b must be > 0");
  RatePlan plan;
  plan.eps = eps;
  plan.b = b;
  plan.q = q;
  plan.C_q = C_q;
  plan.p_tilde = p_tilde_bound(eps, b, q, C_q);
  plan.delta =
      iterate_xi(m, b, LeveledMagnitude::from_double(eps / 9.0), plan.p_tilde);
  LeveledMagnitude delta_sq = pow(plan.delta, 2.0);
  plan.p = ceil_int(LeveledMagnitude::from_double(2.0 * b) *
                    reciprocal(delta_sq));
  LeveledMagnitude p_minus_1 = dec_int(plan.p);
  LeveledMagnitude half_dsq = delta_sq * LeveledMagnitude::from_double(0.5);
  LeveledMagnitude cap =
      p_minus_1.is_zero() ? half_dsq : iterate_xi(m, b, half_dsq, p_minus_1);
  LeveledMagnitude eps3 = LeveledMagnitude::from_double(eps / 3.0);
  LeveledMagnitude tighter =
      compare(cap, eps3) == std::strong_ordering::less ? cap : eps3;
  plan.alpha =
      tighter * LeveledMagnitude::from_double(1.0 - 1.0 / 1048576.0);
  plan.n_threshold =
      ceil_int(LeveledMagnitude::from_double(b) * reciprocal(plan.alpha));
  check_plan(plan);
  return plan;
}

RatePlan rate_plan(double eps, double b, const ModulusSpec& m,
                   const RademacherProfile& profile) {
  return rate_plan(eps, b, m, profile.q, profile.C_q);
}

long long hilbert_rate(double eps, double diam) {
  if (!(eps > 0.0) || !(diam > 0.0))
    throw std::invalid_argument("hilbert_rate: eps and diam must be > 0");
  if (eps >= diam) return 1;
  double x = (diam / eps) * (diam / eps);
  if (x > 9e18) throw std::range_error("hilbert_rate: threshold exceeds int64");
  long long n = static_cast<long long>(std::ceil(x));
  while (n > 1 && diam / std::sqrt(static_cast<double>(n - 1)) <= eps) --n;
  while (diam / std::sqrt(static_cast<double>(n)) > eps) ++n;
  return n;
}

std::string render(const RatePlan& plan) {
  std::string out;
  out += "eps=" + format_double(plan.eps) + "\n";
  out += "b=" + format_double(plan.b) + "\n";
  out += "q=" + format_double(plan.q) + "\n";
  out += "C_q=" + format_double(plan.C_q) + "\n";
  out += "p_tilde=" + to_string(plan.p_tilde) + "\n";
  out += "delta=" + to_string(plan.delta) + "\n";
  out += "p=" + to_string(plan.p) + "\n";
  out += "alpha=" + to_string(plan.alpha) + "\n";
  out += "N=" + to_string(plan.n_threshold) + "\n";
  return out;
}

std::string rate_plan_csv_header() { return "eps,b,q,C_q,p_tilde,delta,p,alpha,N"; }

std::string rate_plan_csv_row(const RatePlan& plan) {
  return format_double(plan.eps) + "," + format_double(plan.b) + "," +
         format_double(plan.q) + "," + format_double(plan.C_q) + "," +
         to_string(plan.p_tilde) + "," + to_string(plan.delta) + "," +
         to_string(plan.p) + "," + to_string(plan.alpha) + "," +
         to_string(plan.n_threshold);
}

}  // namespace cesaro
