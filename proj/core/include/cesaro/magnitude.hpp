#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cesaro {

/// Thrown when an operation on leveled magnitudes cannot produce a result
/// that is meaningful at the representation's precision (e.g. cancellation
/// of two equal stacked exponents).
class MagnitudeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Branch : std::uint8_t { unit, huge, tiny };

/// Positive real with arbitrarily stacked base-10 exponents.
///
/// level 0 stores the value directly; the direct window is
/// [1e-15, 1e15] plus zero. level k >= 1 stores x = 10^E (branch huge)
/// or x = 10^-E (branch tiny), where E is itself a level k-1 value.
/// Every rung satisfies E > 15, so the exponent tower above the stored
/// mantissa is sign-free and a single double describes it: at level k,
///   x = 10^(+-10^(10^...(mantissa)))        (k applications of 10^).
///
/// Representations are kept minimal: a value storable at level k is never
/// stored at level k+1, and exact-boundary values normalize downward.
/// Accuracy contract: derived operations keep the top-level mantissa
/// within 1e-9 relative of the true value's top-level mantissa.
class LeveledMagnitude {
 public:
  /// Zero.
  LeveledMagnitude() = default;

  /// Requires x > 0 and finite. Exact for x inside the level-0 window.
  static LeveledMagnitude from_double(double x);

  static LeveledMagnitude zero() { return LeveledMagnitude(); }
  static LeveledMagnitude one() { return from_double(1.0); }

  /// Normalizing constructor; accepts any (level, branch, mantissa) with a
  /// positive finite mantissa and renormalizes to the minimal level.
  static LeveledMagnitude make(int level, Branch branch, double mantissa);

  int level() const { return level_; }
  Branch branch() const { return branch_; }
  double mantissa() const { return mantissa_; }
  bool is_zero() const { return level_ == 0 && mantissa_ == 0.0; }

  bool fits_double() const;
  /// Value as a plain double; requires fits_double().
  double to_double() const;

 private:
  int level_ = 0;
  Branch branch_ = Branch::unit;
  double mantissa_ = 0.0;
};

/// A signed magnitude (or zero); the result type of log10 and the natural
/// working form for exponent arithmetic.
struct SignedMagnitude {
  int sign = 0;  // -1, 0, +1; zero iff mag.is_zero()
  LeveledMagnitude mag;

  static SignedMagnitude zero() { return {}; }
  static SignedMagnitude from_double(double x);  // any finite x
  static SignedMagnitude positive(const LeveledMagnitude& m);

  bool fits_double() const { return sign == 0 || mag.fits_double(); }
  double to_double() const { return sign == 0 ? 0.0 : sign * mag.to_double(); }
};

// -- comparison ------------------------------------------------------------

std::strong_ordering compare(const LeveledMagnitude& a,
                             const LeveledMagnitude& b);
inline std::strong_ordering operator<=>(const LeveledMagnitude& a,
                                        const LeveledMagnitude& b) {
  return compare(a, b);
}
inline bool operator==(const LeveledMagnitude& a, const LeveledMagnitude& b) {
  return compare(a, b) == std::strong_ordering::equal;
}

std::strong_ordering compare(const SignedMagnitude& a,
                             const SignedMagnitude& b);

// -- arithmetic ------------------------------------------------------------

/// Both operands must be nonzero (zero is a representational convenience,
/// not an arithmetic participant; see module docs).
LeveledMagnitude operator*(const LeveledMagnitude& a,
                           const LeveledMagnitude& b);

/// a^e for finite nonzero e; a nonzero.
LeveledMagnitude pow(const LeveledMagnitude& a, double e);

LeveledMagnitude reciprocal(const LeveledMagnitude& a);

/// Signed base-10 logarithm; a nonzero.
SignedMagnitude log10(const LeveledMagnitude& a);

/// 10^e. For exponents below the level-0 window this rounds to 1
/// (relative error <= 2.4e-15).
LeveledMagnitude exp10(const SignedMagnitude& e);

/// Exact at level 0. Across scales the larger operand absorbs the smaller
/// one when the base-10 exponents differ by more than 15 (relative error
/// <= 1e-15 of the dominant operand); the in-between band is evaluated
/// accurately through logarithms.
LeveledMagnitude add_dominant(const LeveledMagnitude& a,
                              const LeveledMagnitude& b);

/// Signed addition with the same absorption rules. Throws MagnitudeError
/// when opposite-sign operands cancel beyond representational precision.
SignedMagnitude add(const SignedMagnitude& a, const SignedMagnitude& b);

inline SignedMagnitude operator-(const SignedMagnitude& a) {
  return {-a.sign, a.mag};
}

/// a * k for finite k (k == 0 gives zero).
SignedMagnitude scale(const SignedMagnitude& a, double k);

// -- integers --------------------------------------------------------------

/// Smallest integer >= a: exact at level 0, identity above (where the gap
/// to the nearest integer is far below representational precision).
LeveledMagnitude ceil_int(const LeveledMagnitude& a);

/// a - 1 for a >= 1: exact at level 0, absorbed (identity) above.
LeveledMagnitude dec_int(const LeveledMagnitude& a);

// -- text ------------------------------------------------------------------

/// Grammar: level 0 as a decimal; level 1 as "10^E" / "10^-E"; level k >= 2
/// as "10^(10^...)" / "10^-(10^...)" with the innermost exponent printed to
/// 6 significant digits.
std::string to_string(const LeveledMagnitude& m);

/// Parses the to_string grammar (and any non-normal variant of it, e.g.
/// "10^3", which normalizes to level 0).
LeveledMagnitude parse_magnitude(std::string_view text);

/// Shortest decimal that parses back to exactly x.
std::string format_double(double x);

}  // namespace cesaro
