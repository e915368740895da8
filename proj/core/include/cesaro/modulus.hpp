#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cesaro {

class ModulusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// eta(eps) = c * eps^s on 0 < eps <= eps_limit. `exact` is false when the
/// branch is only an asymptotic description of the modulus near zero.
struct PowerBranch {
  double c = 0.0;
  double s = 0.0;
  double eps_limit = 0.0;
  bool exact = true;
};

/// A modulus of uniform convexity eta : (0,2] -> (0,1].
///
/// Three shapes: power (eta = min(1, c*eps^s)), hilbert
/// (eta = 1 - sqrt(1 - eps^2/4)) and a nondecreasing step table
/// interpolated left-constant (the value of the nearest knot at or below
/// the argument; below the first knot the first value extends down).
/// Every shape also evaluates in the log domain, ln_eta(u) = ln eta(e^u),
/// so the shrink maps built on top of it never underflow.
class ModulusSpec {
 public:
  enum class Form { power, hilbert, table };

  static ModulusSpec power_form(double c, double s);
  static ModulusSpec hilbert();
  static ModulusSpec step_table(std::vector<std::pair<double, double>> knots);

  /// Catalogue preset for L^p: p in (1,2) gives power((p-1)/8, 2),
  /// p >= 2 gives power(1/(p*2^p), p). Not derived here; validated
  /// empirically by the verification suites.
  static ModulusSpec lp(double p);

  /// Grammar: `hilbert` | `power:c=<float>,s=<float>` | `table:<path>`
  /// (two-column whitespace-separated text, eps then eta; `#` comments).
  static ModulusSpec parse(std::string_view text);

  Form form() const { return form_; }
  double power_c() const { return c_; }
  double power_s() const { return s_; }
  const std::vector<std::pair<double, double>>& knots() const {
    return knots_;
  }

  /// eta at eps in (0, 2].
  double eta(double eps) const;

  /// ln eta(e^u); arguments above ln 2 are clamped to the domain edge.
  double ln_eta(double u) const;

  /// Power-law description of the modulus for small arguments, when one
  /// exists: power forms below their saturation point (exact), constant
  /// tables everywhere (exact), hilbert below 1e-3 (asymptotic c=1/8, s=2).
  std::optional<PowerBranch> small_eps_branch() const;

  /// The grammar string this spec round-trips through (tables render as
  /// `table:<inline>` with their knots).
  std::string describe() const;

 private:
  ModulusSpec() = default;
  void validate() const;

  Form form_ = Form::hilbert;
  double c_ = 0.0, s_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
  std::vector<double> ln_knot_eps_;  // table only
};

/// The functions derived from (eta, b): the monotone envelope eta1, the
/// integral transform eta_tilde, the rescaled gamma and its inverse, and
/// the compositions q_tilde, q_n, sigma used by the regularity rate.
/// Immutable after construction; evaluators are pure.
class DerivedModuli {
 public:
  DerivedModuli(ModulusSpec m, double b);

  const ModulusSpec& modulus() const { return modulus_; }
  double bound() const { return b_; }

  /// sup of eta over (0, min(2, eps)]; 0 at 0.
  double eta1(double eps) const;

  /// (1/2) * integral of eta1 from 0 to eps. Closed form for power
  /// shapes, exact step sums for tables, adaptive quadrature (abs
  /// tolerance 1e-10) for hilbert.
  double eta_tilde(double eps) const;

  /// gamma(eps) = (b/2) * eta_tilde(4 eps / b); a strictly increasing
  /// bijection of [0, inf) with gamma(eps) <= eps.
  double gamma(double eps) const;

  /// Bisection inverse of gamma, absolute tolerance 1e-12 * max(1, y).
  double gamma_inv(double y) const;

  /// q_tilde(eps) = gamma_inv(3 eps) + eps.
  double q_tilde(double eps) const;

  /// q_n(eps) = gamma_inv(2 eps + b/n) + eps, n >= 1.
  double q_n(double eps, long long n) const;

  /// Bisection inverse of q_tilde, absolute tolerance 1e-12.
  double sigma(double t) const;

 private:
  ModulusSpec modulus_;
  double b_ = 0.0;
  // Table shapes: cumulative integral of eta1 up to each knot.
  std::vector<double> knot_integral_;
};

}  // namespace cesaro
