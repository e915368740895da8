#include "cesaro/modulus.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace cesaro;

namespace {

// Symbolic antiderivative oracle for the hilbert shape:
// (1/2) * int_0^e (1 - sqrt(1 - t^2/4)) dt
//   = (e - asin(e/2) - (e/2) sqrt(1 - e^2/4)) / 2   for e <= 2.
double hilbert_eta_tilde_oracle(double e) {
  if (e <= 2.0)
    return 0.5 * (e - std::asin(0.5 * e) -
                  0.5 * e * std::sqrt(1.0 - 0.25 * e * e));
  return hilbert_eta_tilde_oracle(2.0) + 0.5 * (e - 2.0);  // eta1(2) = 1
}

std::vector<DerivedModuli> catalogue(double b) {
  return {
      DerivedModuli(ModulusSpec::hilbert(), b),
      DerivedModuli(ModulusSpec::power_form(0.25, 1.0), b),
      DerivedModuli(ModulusSpec::lp(1.5), b),
      DerivedModuli(ModulusSpec::lp(3.0), b),
      DerivedModuli(ModulusSpec::step_table({{2.0, 0.5}}), b),
      DerivedModuli(ModulusSpec::step_table(
                        {{0.25, 0.01}, {0.5, 0.05}, {1.0, 0.2}, {2.0, 0.6}}),
                    b),
  };
}

}  // namespace

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(ModulusSpec::power_form(0.0, 1.0), ModulusError);
  CHECK_THROWS_AS(ModulusSpec::power_form(0.25, -1.0), ModulusError);
  CHECK_THROWS_AS(ModulusSpec::step_table({}), ModulusError);
  CHECK_THROWS_AS(ModulusSpec::step_table({{1.0, 0.5}, {0.5, 0.6}}),
                  ModulusError);
  CHECK_THROWS_AS(ModulusSpec::step_table({{0.5, 0.6}, {1.0, 0.5}}),
                  ModulusError);
  CHECK_THROWS_AS(ModulusSpec::step_table({{1.0, 1.5}}), ModulusError);
  CHECK_THROWS_AS(ModulusSpec::step_table({{3.0, 0.5}}), ModulusError);
  CHECK_THROWS_AS(ModulusSpec::lp(1.0), ModulusError);
  CHECK_NOTHROW(ModulusSpec::lp(2.0));
}

TEST_CASE("grammar") {
  auto p = ModulusSpec::parse("power:c=0.25,s=1");
  CHECK(p.form() == ModulusSpec::Form::power);
  CHECK(p.power_c() == 0.25);
  CHECK(ModulusSpec::parse("hilbert").form() == ModulusSpec::Form::hilbert);

  auto path = std::filesystem::temp_directory_path() / "cesaro_mod_table.txt";
  {
    std::ofstream out(path);
    out << "# eps eta\n0.5 0.25\n2 0.5\n";
  }
  auto t = ModulusSpec::parse("table:" + path.string());
  CHECK(t.form() == ModulusSpec::Form::table);
  CHECK(t.eta(1.0) == 0.25);
  CHECK(t.eta(0.1) == 0.25);  // first value extends below the table
  CHECK(t.eta(2.0) == 0.5);
  CHECK_THROWS_AS(ModulusSpec::parse("nope"), ModulusError);
  CHECK_THROWS_AS(ModulusSpec::parse("table:/no/such/file"), ModulusError);
}

TEST_CASE("eta evaluation and log-domain agreement") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-30.0, std::log(2.0));
  for (const auto& d : catalogue(1.0)) {
    const auto& m = d.modulus();
    CHECK(m.eta(1.0) > 0.0);
    for (int i = 0; i < 2000; ++i) {
      double lu = u(gen);
      double direct = std::log(m.eta(std::exp(lu)));
      CHECK(m.ln_eta(lu) == doctest::Approx(direct).epsilon(1e-12));
    }
    // Deep log domain stays finite and slope-consistent.
    double deep = m.ln_eta(-600.0);
    CHECK(std::isfinite(deep));
  }
  CHECK(ModulusSpec::hilbert().eta(1.0) ==
        doctest::Approx(1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK_THROWS(ModulusSpec::hilbert().eta(0.0));
  CHECK_THROWS(ModulusSpec::hilbert().eta(2.5));
}

TEST_CASE("eta1 envelope") {
  DerivedModuli d(ModulusSpec::power_form(0.25, 1.0), 2.0);
  CHECK(d.eta1(1.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.eta1(0.0) == 0.0);
  CHECK(d.eta1(5.0) == doctest::Approx(0.5).epsilon(1e-12));  // clamped at 2
  for (const auto& dm : catalogue(1.0)) {
    double prev = 0.0;
    for (int i = 1; i <= 10000; ++i) {
      double v = dm.eta1(3.0 * i / 10000.0);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("eta_tilde closed forms and quadrature") {
  DerivedModuli d(ModulusSpec::power_form(0.25, 1.0), 2.0);
  CHECK(d.eta_tilde(1.0) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(d.eta_tilde(0.0) == 0.0);

  DerivedModuli h(ModulusSpec::hilbert(), 2.0);
  CHECK(h.eta_tilde(2.0) ==
        doctest::Approx(1.0 - M_PI / 4.0).epsilon(1e-9));
  for (int i = 1; i <= 200; ++i) {
    double e = 3.0 * i / 200.0;
    CHECK(h.eta_tilde(e) ==
          doctest::Approx(hilbert_eta_tilde_oracle(e)).epsilon(1e-8));
    CHECK(std::abs(h.eta_tilde(e) - hilbert_eta_tilde_oracle(e)) < 1e-9);
  }

  // Step tables integrate exactly: hand-computed prefix.
  DerivedModuli t(ModulusSpec::step_table({{0.5, 0.2}, {1.0, 0.4}}), 2.0);
  // integral to 0.75: 0.2*0.5 (extension) + 0.2*0.25 = 0.15; half = 0.075
  CHECK(t.eta_tilde(0.75) == doctest::Approx(0.075).epsilon(1e-14));
  // integral to 1.5: 0.2*0.5 + 0.2*0.5 + 0.4*0.5 = 0.4; half = 0.2
  CHECK(t.eta_tilde(1.5) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("eta_tilde convexity and paper lower bound") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (const auto& d : catalogue(2.0)) {
    for (int i = 0; i < 10000; ++i) {
      double a = u(gen), b = u(gen);
      double mid = d.eta_tilde(0.5 * (a + b));
      double avg = 0.5 * (d.eta_tilde(a) + d.eta_tilde(b));
      CHECK(mid <= avg + 1e-9);
    }
    for (int i = 1; i <= 1000; ++i) {
      double e = 4.0 * i / 1000.0;
      double lower = 0.25 * e * d.modulus().eta(std::min(2.0, 0.5 * e));
      CHECK(d.eta_tilde(e) >= lower - 1e-9);
      CHECK(d.eta_tilde(e) <= 0.5 * e + 1e-9);  // eta1 <= 1
    }
  }
}

TEST_CASE("gamma and its inverse") {
  DerivedModuli d(ModulusSpec::power_form(0.25, 1.0), 2.0);
  // gamma(eps) = eta_tilde(2 eps) = eps^2/4 for eps <= 1
  CHECK(d.gamma(1.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.gamma(0.0) == 0.0);
  CHECK(d.gamma_inv(0.0) == 0.0);
  CHECK(d.gamma_inv(0.25) == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(1e-6, 50.0);
  for (const auto& dm : catalogue(2.0)) {
    for (int i = 0; i < 300; ++i) {
      double y = u(gen);
      CHECK(dm.gamma(dm.gamma_inv(y)) == doctest::Approx(y).epsilon(1e-9));
    }
    for (int i = 1; i <= 1000; ++i) {
      double e = 5.0 * i / 1000.0;
      CHECK(dm.gamma(e) <= e + 1e-12);
    }
  }
}

TEST_CASE("q_tilde, q_n, sigma") {
  DerivedModuli d(ModulusSpec::power_form(0.25, 1.0), 2.0);
  CHECK(d.q_tilde(0.0) == 0.0);
  // gamma_inv(u) = 2 sqrt(u): q_tilde(0.01) = 2 sqrt(0.03) + 0.01
  CHECK(d.q_tilde(0.01) ==
        doctest::Approx(0.35641016151377546).epsilon(1e-9));
  CHECK(d.q_n(0.01, 200) == doctest::Approx(d.q_tilde(0.01)).epsilon(1e-9));
  CHECK(d.q_n(0.01, 400) ==
        doctest::Approx(0.32622776601683793).epsilon(1e-9));
  CHECK(d.q_n(0.01, 400) <= d.q_tilde(0.01) + 1e-9);
  CHECK(d.q_n(0.0, 7) > 0.0);

  CHECK(d.sigma(0.0) == 0.0);
  CHECK(d.sigma(0.35641016151377546) == doctest::Approx(0.01).epsilon(1e-6));

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (const auto& dm : catalogue(2.0)) {
    for (int i = 0; i < 200; ++i) {
      double e = u(gen);
      double qt = dm.q_tilde(e);
      CHECK(qt >= e);
      CHECK(dm.sigma(qt) == doctest::Approx(e).epsilon(1e-9));
      CHECK(dm.sigma(e) <= e + 1e-12);
    }
  }
}
