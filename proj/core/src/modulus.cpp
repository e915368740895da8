#include "cesaro/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace cesaro {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ModulusError(msg); }

// Adaptive Simpson with the classic halving estimate.
double simpson(const auto& f, double a, double b) {
  double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

double adaptive_simpson(const auto& f, double a, double b, double tol,
                        double whole, int depth) {
  if (depth > 60) fail("quadrature did not converge");
  double m = 0.5 * (a + b);
  double left = simpson(f, a, m), right = simpson(f, m, b);
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, tol / 2.0, left, depth + 1) +
         adaptive_simpson(f, m, b, tol / 2.0, right, depth + 1);
}

double integrate(const auto& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  return adaptive_simpson(f, a, b, tol, simpson(f, a, b), 0);
}

}  // namespace

ModulusSpec ModulusSpec::power_form(double c, double s) {
  if (!(c > 0.0) || !(s > 0.0) || !std::isfinite(c) || !std::isfinite(s))
    fail("power modulus needs finite c > 0 and s > 0");
  ModulusSpec m;
  m.form_ = Form::power;
  m.c_ = c;
  m.s_ = s;
  m.validate();
  return m;
}

ModulusSpec ModulusSpec::hilbert() {
  ModulusSpec m;
  m.form_ = Form::hilbert;
  m.validate();
  return m;
}

ModulusSpec ModulusSpec::step_table(
    std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) fail("table modulus needs at least one knot");
  ModulusSpec m;
  m.form_ = Form::table;
  m.knots_ = std::move(knots);
  double prev_eps = 0.0, prev_eta = 0.0;
  for (auto& [eps, eta] : m.knots_) {
    if (!(eps > prev_eps) || eps > 2.0)
      fail("table knots must be strictly increasing within (0, 2]");
    if (!(eta > 0.0) || eta > 1.0) fail("table values must lie in (0, 1]");
    if (eta < prev_eta) fail("table values must be nondecreasing");
    prev_eps = eps;
    prev_eta = eta;
  }
  m.ln_knot_eps_.reserve(m.knots_.size());
  for (auto& [eps, eta] : m.knots_) m.ln_knot_eps_.push_back(std::log(eps));
  m.validate();
  return m;
}

ModulusSpec ModulusSpec::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) fail("lp preset needs p > 1");
  if (p < 2.0) return power_form((p - 1.0) / 8.0, 2.0);
  return power_form(std::pow(0.5, p) / p, p);
}

ModulusSpec ModulusSpec::parse(std::string_view text) {
  if (text == "hilbert") return hilbert();
  if (text.rfind("power:", 0) == 0) {
    double c = 0.0, s = 0.0;
    std::string body(text.substr(6));
    if (std::sscanf(body.c_str(), "c=%lf,s=%lf", &c, &s) != 2)
      fail("power grammar is power:c=<float>,s=<float>");
    return power_form(c, s);
  }
  if (text.rfind("table:", 0) == 0) {
    std::string path(text.substr(6));
    std::ifstream in(path);
    if (!in) fail("cannot open table file '" + path + "'");
    std::vector<std::pair<double, double>> knots;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream row(line);
      double eps, eta;
      if (row >> eps >> eta) knots.emplace_back(eps, eta);
    }
    return step_table(std::move(knots));
  }
  fail("unknown modulus '" + std::string(text) +
       "' (expected hilbert, power:c=..,s=.., or table:<path>)");
}

void ModulusSpec::validate() const {
  for (int i = 1; i <= 1000; ++i) {
    double eps = 2.0 * i / 1000.0;
    double v = eta(eps);
    if (!(v > 0.0) || v > 1.0 || !std::isfinite(v)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "eta(%g) = %g is outside (0, 1]", eps, v);
      fail(buf);
    }
  }
}

double ModulusSpec::eta(double eps) const {
  if (!(eps > 0.0) || eps > 2.0)
    fail("eta: argument must lie in (0, 2]");
  switch (form_) {
    case Form::power:
      return std::min(1.0, c_ * std::pow(eps, s_));
    case Form::hilbert: {
      double x = eps * eps / 4.0;
      return x / (1.0 + std::sqrt(1.0 - std::min(1.0, x)));
    }
    case Form::table: {
      // Nearest knot at or below eps; first value extends below the table.
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), eps,
          [](double v, const auto& k) { return v < k.first; });
      if (it == knots_.begin()) return knots_.front().second;
      return std::prev(it)->second;
    }
  }
  fail("unreachable");
}

double ModulusSpec::ln_eta(double u) const {
  constexpr double kLn2 = 0.6931471805599453;
  u = std::min(u, kLn2);
  switch (form_) {
    case Form::power:
      return std::min(0.0, std::log(c_) + s_ * u);
    case Form::hilbert: {
      // ln eta = 2u - ln(4 (1 + sqrt(1 - e^{2u}/4))); stable at any scale.
      double x = std::exp(2.0 * u) / 4.0;  // harmless underflow for tiny u
      return 2.0 * u - std::log(4.0 * (1.0 + std::sqrt(1.0 - std::min(1.0, x))));
    }
    case Form::table: {
      auto it = std::upper_bound(ln_knot_eps_.begin(), ln_knot_eps_.end(), u);
      size_t idx = it == ln_knot_eps_.begin()
                       ? 0
                       : static_cast<size_t>(it - ln_knot_eps_.begin()) - 1;
      return std::log(knots_[idx].second);
    }
  }
  fail("unreachable");
}

std::optional<PowerBranch> ModulusSpec::small_eps_branch() const {
  switch (form_) {
    case Form::power: {
      double sat = std::pow(1.0 / c_, 1.0 / s_);  // where c*eps^s reaches 1
      return PowerBranch{c_, s_, std::min(2.0, sat), true};
    }
    case Form::hilbert:
      return PowerBranch{0.125, 2.0, 1e-3, false};
    case Form::table: {
      for (const auto& [eps, eta] : knots_)
        if (eta != knots_.front().second) return std::nullopt;
      constexpr double inf = std::numeric_limits<double>::infinity();
      return PowerBranch{knots_.front().second, 0.0, inf, true};
    }
  }
  return std::nullopt;
}

std::string ModulusSpec::describe() const {
  char buf[64];
  switch (form_) {
    case Form::power:
      std::snprintf(buf, sizeof buf, "power:c=%.17g,s=%.17g", c_, s_);
      return buf;
    case Form::hilbert:
      return "hilbert";
    case Form::table: {
      std::string out = "table:";
      for (size_t i = 0; i < knots_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.17g %.17g", i ? ";" : "",
                      knots_[i].first, knots_[i].second);
        out += buf;
      }
      return out;
    }
  }
  return "";
}

DerivedModuli::DerivedModuli(ModulusSpec m, double b)
    : modulus_(std::move(m)), b_(b) {
  if (!(b > 0.0) || !std::isfinite(b)) fail("DerivedModuli: bound must be > 0");
  if (modulus_.form() == ModulusSpec::Form::table) {
    // Exact cumulative integral of the step envelope up to each knot.
    const auto& ks = modulus_.knots();
    knot_integral_.resize(ks.size());
    double acc = ks.front().second * ks.front().first;  // first value extends down
    knot_integral_[0] = acc;
    for (size_t i = 1; i < ks.size(); ++i) {
      acc += ks[i - 1].second * (ks[i].first - ks[i - 1].first);
      knot_integral_[i] = acc;
    }
  }
}

double DerivedModuli::eta1(double eps) const {
  if (eps < 0.0) fail("eta1: negative argument");
  if (eps == 0.0) return 0.0;
  // All stored shapes are nondecreasing, so the sup sits at the clamp point.
  return modulus_.eta(std::min(2.0, eps));
}

double DerivedModuli::eta_tilde(double eps) const {
  if (eps < 0.0) fail("eta_tilde: negative argument");
  if (eps == 0.0) return 0.0;
  double head = std::min(eps, 2.0);
  double tail = eps > 2.0 ? 0.5 * (eps - 2.0) * eta1(2.0) : 0.0;
  switch (modulus_.form()) {
    case ModulusSpec::Form::power: {
      double c = modulus_.power_c(), s = modulus_.power_s();
      double sat = std::pow(1.0 / c, 1.0 / s);
      double x = std::min(head, sat);
      double body = 0.5 * c * std::pow(x, s + 1.0) / (s + 1.0);
      if (head > sat) body += 0.5 * (head - sat);  // saturated stretch, eta = 1
      return body + tail;
    }
    case ModulusSpec::Form::hilbert: {
      auto f = [this](double t) { return t > 0.0 ? modulus_.eta(t) : 0.0; };
      return 0.5 * integrate(f, 0.0, head, 1e-10) + tail;
    }
    case ModulusSpec::Form::table: {
      const auto& ks = modulus_.knots();
      auto it = std::upper_bound(
          ks.begin(), ks.end(), head,
          [](double v, const auto& k) { return v < k.first; });
      double body;
      if (it == ks.begin()) {
        body = ks.front().second * head;
      } else {
        size_t idx = static_cast<size_t>(it - ks.begin()) - 1;
        body = knot_integral_[idx] + ks[idx].second * (head - ks[idx].first);
      }
      return 0.5 * body + tail;
    }
  }
  fail("unreachable");
}

double DerivedModuli::gamma(double eps) const {
  if (eps < 0.0) fail("gamma: negative argument");
  return 0.5 * b_ * eta_tilde(4.0 * eps / b_);
}

double DerivedModuli::gamma_inv(double y) const {
  if (y < 0.0) fail("gamma_inv: negative argument");
  if (y == 0.0) return 0.0;
  double hi = std::max(1.0, b_);
  while (gamma(hi) < y) {
    hi *= 2.0;
    if (hi > 1e300) fail("gamma_inv: target out of range");
  }
  // Dual stopping rule: the absolute tolerance of the contract plus a
  // relative one, so roots collapsed far below 1 keep full significance.
  double lo = 0.0, abs_tol = 1e-12 * std::max(1.0, y);
  for (int it = 0; it < 4000; ++it) {
    if (hi - lo <= abs_tol && hi <= lo * (1.0 + 1e-13)) break;
    if (hi - lo <= 1e-300) break;
    double mid = lo == 0.0 ? 0.5 * hi : lo * std::sqrt(hi / lo);
    (gamma(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double DerivedModuli::q_tilde(double eps) const {
  if (eps < 0.0) fail("q_tilde: negative argument");
  return gamma_inv(3.0 * eps) + eps;
}

double DerivedModuli::q_n(double eps, long long n) const {
  if (eps < 0.0 || n < 1) fail("q_n: needs eps >= 0 and n >= 1");
  return gamma_inv(2.0 * eps + b_ / static_cast<double>(n)) + eps;
}

double DerivedModuli::sigma(double t) const {
  if (t < 0.0) fail("sigma: negative argument");
  if (t == 0.0) return 0.0;
  // q_tilde(eps) >= eps, so the preimage sits in [0, t].
  double lo = 0.0, hi = t;
  for (int it = 0; it < 4000; ++it) {
    if (hi - lo <= 1e-12 && hi <= lo * (1.0 + 1e-13)) break;
    if (hi - lo <= 1e-300) break;
    double mid = lo == 0.0 ? 0.5 * hi : lo * std::sqrt(hi / lo);
    (q_tilde(mid) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cesaro
