#include "cesaro/magnitude.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace cesaro {

namespace {

constexpr double kWindowHi = 1e15;
constexpr double kWindowLogHi = 15.0;

[[noreturn]] void fail(const std::string& msg) { throw MagnitudeError(msg); }

// log10 of a magnitude whose own level is <= 1, as a plain double. At
// level 1 the mantissa *is* the exponent, so this is exact.
double log10_as_double(const LeveledMagnitude& m) {
  assert(!m.is_zero() && m.level() <= 1);
  if (m.level() == 0) return std::log10(m.mantissa());
  return m.branch() == Branch::tiny ? -m.mantissa() : m.mantissa();
}

// Magnitude from a plain-double base-10 logarithm.
LeveledMagnitude from_log10_double(double lg) {
  if (std::abs(lg) <= kWindowLogHi)
    return LeveledMagnitude::from_double(std::pow(10.0, lg));
  if (lg > 0.0) return LeveledMagnitude::make(1, Branch::huge, lg);
  return LeveledMagnitude::make(1, Branch::tiny, -lg);
}

}  // namespace

LeveledMagnitude LeveledMagnitude::from_double(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    fail("LeveledMagnitude::from_double: input must be positive and finite");
  return make(0, Branch::unit, x);
}

LeveledMagnitude LeveledMagnitude::make(int level, Branch branch,
                                        double mantissa) {
  if (level < 0 || !std::isfinite(mantissa))
    fail("LeveledMagnitude::make: bad level or mantissa");
  if (level == 0) {
    if (mantissa == 0.0) return LeveledMagnitude();
    if (mantissa < 0.0) fail("LeveledMagnitude::make: negative mantissa");
  } else {
    if (mantissa <= 0.0) fail("LeveledMagnitude::make: exponent must be > 0");
    if (branch == Branch::unit)
      fail("LeveledMagnitude::make: level >= 1 requires huge or tiny");
  }

  // Escalate while the innermost rung overflows its window.
  while (mantissa > kWindowHi) {
    mantissa = std::log10(mantissa);
    if (level == 0) branch = Branch::huge;
    ++level;
  }
  // De-escalate while the value is storable one level down. Boundary
  // values (exponent exactly 15) normalize downward.
  while (level > 0 && mantissa <= kWindowLogHi) {
    if (level == 1) {
      mantissa = std::pow(10.0, branch == Branch::tiny ? -mantissa : mantissa);
      branch = Branch::unit;
      level = 0;
      break;
    }
    mantissa = std::pow(10.0, mantissa);
    --level;
  }
  if (level == 0 && mantissa != 0.0 &&
      (mantissa < 1.0 / kWindowHi || mantissa > kWindowHi)) {
    // Below the window: re-express as 10^-E.
    if (mantissa < 1.0) {
      double e = -std::log10(mantissa);
      if (e <= kWindowLogHi) e = std::nextafter(kWindowLogHi, 16.0);
      return make(1, Branch::tiny, e);
    }
    return make(1, Branch::huge, std::log10(mantissa));
  }

  LeveledMagnitude out;
  out.level_ = level;
  out.branch_ = level == 0 ? Branch::unit : branch;
  out.mantissa_ = mantissa;
  return out;
}

bool LeveledMagnitude::fits_double() const {
  if (level_ == 0) return true;
  return level_ == 1 && mantissa_ < 308.0;
}

double LeveledMagnitude::to_double() const {
  if (level_ == 0) return mantissa_;
  if (!fits_double()) fail("to_double: value outside double range");
  return std::pow(10.0, branch_ == Branch::tiny ? -mantissa_ : mantissa_);
}

SignedMagnitude SignedMagnitude::from_double(double x) {
  if (!std::isfinite(x)) fail("SignedMagnitude::from_double: non-finite");
  if (x == 0.0) return {};
  return {x > 0.0 ? 1 : -1, LeveledMagnitude::from_double(std::abs(x))};
}

SignedMagnitude SignedMagnitude::positive(const LeveledMagnitude& m) {
  return {m.is_zero() ? 0 : 1, m};
}

std::strong_ordering compare(const LeveledMagnitude& a,
                             const LeveledMagnitude& b) {
  auto cls = [](const LeveledMagnitude& m) {
    if (m.is_zero()) return -2;
    switch (m.branch()) {
      case Branch::tiny: return -1;
      case Branch::unit: return 0;
      case Branch::huge: return 1;
    }
    return 0;
  };
  auto ord = [](double x, double y) {
    return x < y    ? std::strong_ordering::less
           : x == y ? std::strong_ordering::equal
                    : std::strong_ordering::greater;
  };
  int ca = cls(a), cb = cls(b);
  if (ca != cb) return ca <=> cb;
  switch (ca) {
    case -2:
      return std::strong_ordering::equal;
    case 0:
      return ord(a.mantissa(), b.mantissa());
    case 1:
      if (a.level() != b.level()) return a.level() <=> b.level();
      return ord(a.mantissa(), b.mantissa());
    default:  // both tiny: deeper level or larger exponent means smaller
      if (a.level() != b.level()) return b.level() <=> a.level();
      return ord(b.mantissa(), a.mantissa());
  }
}

std::strong_ordering compare(const SignedMagnitude& a,
                             const SignedMagnitude& b) {
  if (a.sign != b.sign) return a.sign <=> b.sign;
  if (a.sign == 0) return std::strong_ordering::equal;
  auto c = compare(a.mag, b.mag);
  if (a.sign > 0) return c;
  if (c == std::strong_ordering::less) return std::strong_ordering::greater;
  if (c == std::strong_ordering::greater) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

SignedMagnitude log10(const LeveledMagnitude& a) {
  if (a.is_zero()) fail("log10: zero has no logarithm here");
  if (a.level() == 0) {
    double lg = std::log10(a.mantissa());
    return SignedMagnitude::from_double(lg);
  }
  int sign = a.branch() == Branch::tiny ? -1 : 1;
  // Drop one level: the exponent E is a level-(k-1) value, huge on every
  // rung below the top.
  LeveledMagnitude e = a.level() == 1
                           ? LeveledMagnitude::from_double(a.mantissa())
                           : LeveledMagnitude::make(a.level() - 1, Branch::huge,
                                                    a.mantissa());
  return {sign, e};
}

LeveledMagnitude exp10(const SignedMagnitude& e) {
  if (e.sign == 0) return LeveledMagnitude::one();
  if (e.mag.level() == 0)
    return from_log10_double(e.sign * e.mag.mantissa());
  if (e.mag.branch() == Branch::tiny) return LeveledMagnitude::one();
  Branch br = e.sign > 0 ? Branch::huge : Branch::tiny;
  return LeveledMagnitude::make(e.mag.level() + 1, br, e.mag.mantissa());
}

SignedMagnitude add(const SignedMagnitude& a, const SignedMagnitude& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;

  if (a.mag.level() == 0 && b.mag.level() == 0)
    return SignedMagnitude::from_double(a.sign * a.mag.mantissa() +
                                        b.sign * b.mag.mantissa());

  if (a.mag.level() <= 1 && b.mag.level() <= 1) {
    // Both logarithms are plain doubles; evaluate through them.
    double la = log10_as_double(a.mag), lb = log10_as_double(b.mag);
    const SignedMagnitude& hi = la >= lb ? a : b;
    double lhi = std::max(la, lb), d = std::min(la, lb) - lhi;  // d <= 0
    double small = std::pow(10.0, d);                           // may underflow
    if (a.sign == b.sign) {
      if (small == 0.0) return hi;
      return {a.sign, from_log10_double(lhi + std::log1p(small) / M_LN10)};
    }
    if (la == lb) return {};
    // Opposite signs: flag cancellation finer than the inputs' own
    // log-domain precision instead of returning noise.
    if (a.mag.level() == 1 || b.mag.level() == 1) {
      double ulp_gap = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max({std::abs(la), std::abs(lb), 1.0});
      if (-d < ulp_gap)
        fail("add: cancellation below representational precision");
    }
    if (small == 0.0) return hi;
    return {hi.sign, from_log10_double(lhi + std::log1p(-small) / M_LN10)};
  }

  // A stacked exponent at level >= 2 is involved: distinct representations
  // differ by less than one representational ulp after absorption, so the
  // dominant operand is the exact answer at this precision.
  auto c = compare(a.mag, b.mag);
  if (c == std::strong_ordering::equal) {
    if (a.sign == b.sign) return a;  // doubling is absorbed at this level
    fail("add: cancellation of equal stacked exponents is indeterminate");
  }
  return c == std::strong_ordering::greater ? a : b;
}

SignedMagnitude scale(const SignedMagnitude& a, double k) {
  if (!std::isfinite(k)) fail("scale: non-finite factor");
  if (a.sign == 0 || k == 0.0) return {};
  int sign = k > 0 ? a.sign : -a.sign;
  double ak = std::abs(k);
  if (a.mag.level() == 0) {
    double m = a.mag.mantissa();
    // Direct product unless it leaves the double range at either end.
    double prod = m * ak;
    if (prod > 0.0 && std::isfinite(prod))
      return {sign, LeveledMagnitude::from_double(prod)};
  }
  SignedMagnitude lg = log10(a.mag);
  SignedMagnitude sum = add(lg, SignedMagnitude::from_double(std::log10(ak)));
  return {sign, exp10(sum)};
}

LeveledMagnitude operator*(const LeveledMagnitude& a,
                           const LeveledMagnitude& b) {
  if (a.is_zero() || b.is_zero()) fail("operator*: zero operand");
  if (a.level() == 0 && b.level() == 0) {
    double p = a.mantissa() * b.mantissa();
    if (p >= 1.0 / kWindowHi && p <= kWindowHi)
      return LeveledMagnitude::from_double(p);
  }
  SignedMagnitude lg = add(log10(a), log10(b));
  return exp10(lg);
}

LeveledMagnitude pow(const LeveledMagnitude& a, double e) {
  if (a.is_zero()) fail("pow: zero base");
  if (e == 0.0 || !std::isfinite(e)) fail("pow: exponent must be finite nonzero");
  return exp10(scale(log10(a), e));
}

LeveledMagnitude reciprocal(const LeveledMagnitude& a) {
  if (a.is_zero()) fail("reciprocal: zero operand");
  if (a.level() == 0) return LeveledMagnitude::from_double(1.0 / a.mantissa());
  Branch br = a.branch() == Branch::huge ? Branch::tiny : Branch::huge;
  return LeveledMagnitude::make(a.level(), br, a.mantissa());
}

LeveledMagnitude add_dominant(const LeveledMagnitude& a,
                              const LeveledMagnitude& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  SignedMagnitude s =
      add(SignedMagnitude::positive(a), SignedMagnitude::positive(b));
  return s.mag;
}

LeveledMagnitude ceil_int(const LeveledMagnitude& a) {
  if (a.is_zero()) return a;
  if (a.branch() == Branch::tiny) return LeveledMagnitude::one();
  if (a.level() == 0) return LeveledMagnitude::from_double(std::ceil(a.mantissa()));
  return a;  // integers are denser than representational precision here
}

LeveledMagnitude dec_int(const LeveledMagnitude& a) {
  if (a.level() == 0) {
    if (a.mantissa() < 1.0) fail("dec_int: operand below 1");
    double m = a.mantissa() - 1.0;
    return m == 0.0 ? LeveledMagnitude::zero()
                    : LeveledMagnitude::from_double(m);
  }
  if (a.branch() == Branch::tiny) fail("dec_int: operand below 1");
  return a;  // absorbed: relative effect <= 1e-15
}

std::string format_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

std::string to_string(const LeveledMagnitude& m) {
  if (m.level() == 0) return format_double(m.mantissa());
  std::string sign = m.branch() == Branch::tiny ? "-" : "";
  if (m.level() == 1) return "10^" + sign + format_double(m.mantissa());
  char inner[40];
  std::snprintf(inner, sizeof inner, "%.6g", m.mantissa());
  std::string tower = std::string("10^") + inner;
  for (int k = 2; k < m.level(); ++k) tower = "10^(" + tower + ")";
  return "10^" + sign + "(" + tower + ")";
}

LeveledMagnitude parse_magnitude(std::string_view text) {
  auto bad = [&] { fail("parse_magnitude: cannot parse '" + std::string(text) + "'"); };
  size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace((unsigned char)text[i])) ++i; };
  skip_ws();
  if (text.compare(i, 3, "10^") != 0) {
    // Plain decimal.
    std::string s(text.substr(i));
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) bad();
    while (*end && std::isspace((unsigned char)*end)) ++end;
    if (*end) bad();
    if (v == 0.0) return LeveledMagnitude::zero();
    return LeveledMagnitude::from_double(v);
  }
  i += 3;
  Branch br = Branch::huge;
  if (i < text.size() && text[i] == '-') {
    br = Branch::tiny;
    ++i;
  }
  int depth = 1;
  while (text.compare(i, 4, "(10^") == 0) {
    ++depth;
    i += 4;
  }
  std::string rest(text.substr(i));
  char* end = nullptr;
  double m = std::strtod(rest.c_str(), &end);
  if (end == rest.c_str()) bad();
  size_t consumed = static_cast<size_t>(end - rest.c_str());
  for (int k = 1; k < depth; ++k) {
    if (consumed >= rest.size() || rest[consumed] != ')') bad();
    ++consumed;
  }
  while (consumed < rest.size() && std::isspace((unsigned char)rest[consumed]))
    ++consumed;
  if (consumed != rest.size()) bad();
  if (!(m > 0.0)) bad();
  return LeveledMagnitude::make(depth, br, m);
}

}  // namespace cesaro
