#include "cesaro/verify.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cesaro/rademacher.hpp"

using namespace cesaro;

namespace {

LpPoint axis(int dim, int i) {
  LpPoint e(dim, 0.0);
  e[i] = 1.0;
  return e;
}

std::vector<LpPoint> sampled_batch(const LpSpace& s, int n, std::uint64_t seed,
                                   std::uint64_t stream) {
  CounterRng rng(seed, stream);
  std::vector<LpPoint> pts(n);
  for (auto& p : pts) p = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
  return pts;
}

}  // namespace

TEST_CASE("rademacher: single point is an equality case") {
  LpSpace s{3, 2.0};
  Verdict v = rademacher_check(s, {LpPoint{0.3, -0.4, 0.1}}, 2.0, 1.0);
  CHECK(v.passed);
  CHECK(std::abs(v.worst_slack) <= 1e-12);
  CHECK(v.trials == 2);
}

TEST_CASE("rademacher: the reals at q=2 are exactly tight") {
  LpSpace s{1, 2.0};
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto pts = sampled_batch(s, 6, 11, t);
    Verdict v = rademacher_check(s, pts, 2.0, 1.0);
    CHECK(v.passed);
    CHECK(std::abs(v.worst_slack) <= 1e-12);  // cross terms cancel exactly
  }
}

TEST_CASE("rademacher: l1 square counterexample is detected with witness") {
  LpSpace s{2, 1.0};
  std::vector<LpPoint> pts = {axis(2, 0), axis(2, 1)};
  Verdict v = rademacher_check(s, pts, 2.0, 1.0);
  CHECK_FALSE(v.passed);
  REQUIRE(v.witness.has_value());
  // LHS = 2, RHS = sqrt(2): normalized slack (sqrt2 - 2)/2.
  CHECK(v.worst_slack ==
        doctest::Approx((std::sqrt(2.0) - 2.0) / 2.0).epsilon(1e-12));
  // Witness replay reproduces the violation bit for bit.
  CHECK(rademacher_slack(s, v.witness->points, 2.0, 1.0) == v.worst_slack);
  CHECK(v.witness->points == pts);
}

TEST_CASE("rademacher: exhaustive cap and the sampled variant") {
  LpSpace s{2, 2.0};
  std::vector<LpPoint> big(21, axis(2, 0));
  CHECK_THROWS(rademacher_check(s, big, 2.0, 1.0));
  Verdict v = rademacher_check_sampled(s, big, 2.0, 10.0, 20000, 3);
  CHECK(v.passed);
  CHECK(v.trials == 20000);
}

TEST_CASE("rademacher: sampled moment matches the exhaustive one within 4 SE") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    LpSpace s{4, t % 2 ? 2.0 : 1.5};
    auto pts = sampled_batch(s, 8, 31, t);
    double exact = rademacher_moment_exact(s, pts, 2.0);
    long long samples = t < 4 ? 1000000 : 100000;
    MomentEstimate est = rademacher_moment_sampled(s, pts, 2.0, samples, t);
    CHECK(std::abs(est.value - exact) <= 4.0 * est.std_error + 1e-12);
  }
}

TEST_CASE("kahane: chain on the reals, by hand") {
  LpSpace s{1, 2.0};
  std::vector<LpPoint> pts = {LpPoint{1.0}, LpPoint{1.0}};
  // moments: m1 = E|e1 + e2| = 1, mq = sqrt(E(e1+e2)^2) = sqrt(2), K_2 = 3.
  Verdict v = kahane_check(s, pts, 2.0);
  CHECK(v.passed);
  CHECK(v.worst_slack ==
        doctest::Approx((std::sqrt(2.0) - 1.0) / std::sqrt(2.0)).epsilon(1e-9));
  Verdict single = kahane_check(s, {LpPoint{0.7}}, 2.0);
  CHECK(single.passed);
  CHECK(std::abs(kahane_slack(s, {LpPoint{0.7}}, 2.0)) >= 0.0);
}

TEST_CASE("kahane: random l3 batches pass at q=1.5") {
  LpSpace s{5, 3.0};
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto pts = sampled_batch(s, 7, 17, t);
    Verdict v = kahane_check(s, pts, 1.5);
    CHECK(v.passed);
  }
}

TEST_CASE("nonsquare: hilbert-witnessed delta passes on l2") {
  LpSpace s{4, 2.0};
  double delta = 1.0 - std::sqrt(3.0) / 2.0;
  Verdict v = nonsquare_check(s, delta, 20000, 7);
  CHECK(v.passed);
  CHECK(v.trials == 20000);
  // Degenerate pair: both sides zero.
  LpPoint zero(4, 0.0);
  CHECK(nonsquare_slack(s, zero, zero, delta) == 0.0);
}

TEST_CASE("nonsquare: the l1 square fails at delta = 1/2") {
  LpSpace s{2, 1.0};
  CHECK(nonsquare_slack(s, axis(2, 0), axis(2, 1), 0.5) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  Verdict v = nonsquare_check(s, 0.5, 20000, 7);
  CHECK_FALSE(v.passed);
  REQUIRE(v.witness.has_value());
  // Replay the sampled witness standalone.
  CHECK(nonsquare_slack(s, v.witness->points[0], v.witness->points[1], 0.5) ==
        v.worst_slack);
}

TEST_CASE("modulus: hilbert preset against l2 and l1") {
  Verdict ok = modulus_check({6, 2.0}, ModulusSpec::hilbert(), 20000, 11);
  CHECK(ok.passed);
  Verdict bad = modulus_check({2, 1.0}, ModulusSpec::hilbert(), 20000, 11);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.witness.has_value());
  CHECK(modulus_slack({2, 1.0}, bad.witness->points[0], bad.witness->points[1],
                      ModulusSpec::hilbert()) == bad.worst_slack);
  // Hand-checked counterexample: e1, e2 in l1 have midpoint norm 1.
  double hand = modulus_slack({2, 1.0}, axis(2, 0), axis(2, 1),
                              ModulusSpec::hilbert());
  CHECK(hand == doctest::Approx(-1.0).epsilon(1e-12));
  // Identical points are vacuous.
  CHECK(std::isnan(modulus_slack({2, 1.0}, axis(2, 0), axis(2, 0),
                                 ModulusSpec::hilbert())));
}

TEST_CASE("mean-zero sums: degenerate and hand-checked cases") {
  LpSpace s{2, 2.0};
  // Single point: every variable is constantly zero.
  Verdict v0 = mean_zero_sum_check(s, {1.0}, {axis(2, 0)}, 2.0, 1.0, 3, 1000, 5);
  CHECK(v0.passed);
  CHECK(v0.worst_slack == 0.0);

  // Two points +-e1: lhs^2 must equal the variance sum exactly.
  std::vector<LpPoint> pm = {axis(2, 0), LpPoint{-1.0, 0.0}};
  Verdict v = mean_zero_sum_check(s, {0.5, 0.5}, pm, 2.0, 1.0, 2, 1000, 5);
  CHECK(v.passed);
  // lhs = sqrt(1/2), rhs = 2 sqrt(1/2): normalized slack = sqrt(1/2)/sqrt(2).
  CHECK(v.worst_slack ==
        doctest::Approx(std::sqrt(0.5) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(v.trials == 4);

  // Constant below the sharp one fails.
  Verdict bad = mean_zero_sum_check(s, {0.5, 0.5}, pm, 2.0, 0.4, 2, 1000, 5);
  CHECK_FALSE(bad.passed);

  // Monte Carlo fallback agrees with the exhaustive route.
  Verdict mc = mean_zero_sum_check(s, {0.5, 0.5}, pm, 2.0, 1.0, 2, 3, 5);
  CHECK(mc.passed);
  CHECK(mc.trials == 3);
}

TEST_CASE("lp presets hold empirically on their own spaces") {
  // The catalogue moduli are not derived here; this sampled check is what
  // admits them.
  struct Case {
    double p;
    int dim;
  } cases[] = {{1.5, 4}, {1.2, 3}, {3.0, 4}, {2.0, 6}, {5.0, 2}};
  for (const auto& c : cases) {
    Verdict v = modulus_check({c.dim, c.p}, ModulusSpec::lp(c.p), 20000, 37);
    CHECK(v.passed);
  }
  // And they are honest: an lp preset overclaims on a strictly flatter space.
  Verdict bad = modulus_check({2, 1.0}, ModulusSpec::lp(2.0), 20000, 37);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("mean-zero sums: profile constants cover random batches") {
  LpSpace s{3, 2.0};
  RademacherProfile prof = rademacher_profile(1.0 - std::sqrt(3.0) / 2.0);
  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng(41, t);
    auto pts = sampled_batch(s, 4, 41, t);
    auto w = sample_simplex(4, rng);
    Verdict v = mean_zero_sum_check(s, w, pts, prof.q, prof.C_q, 3, 200000, t);
    CHECK(v.passed);
  }
}

TEST_CASE("maurey: empirical means approximate convex combinations") {
  LpSpace s{2, 2.0};
  std::vector<LpPoint> pm = {axis(2, 0), LpPoint{-1.0, 0.0}};
  Verdict v = maurey_check(s, {0.5, 0.5}, pm, 100, 2.0, 1.0, 4000, 13);
  CHECK(v.passed);
  // The binomial oracle: mean |2 B(100,1/2) - 100|/100 * b with b = 2 is
  // about 0.159; the bound is 0.4. Slack must reflect that order.
  CHECK(v.worst_slack > 0.1);
  Verdict single = maurey_check(s, {1.0}, {axis(2, 0)}, 50, 2.0, 1.0, 500, 13);
  CHECK(single.passed);
  CHECK_THROWS(maurey_check(s, {0.5, 0.5}, pm, 20000, 2.0, 1.0, 100, 13));
}

TEST_CASE("approximate fixed points: sampler honors its residual bound") {
  LpSpace s{2, 2.0};
  MapDescriptor rot = rotation_map({1.3}, 2.0);
  ApproxFixedPointSampler afp(s, rot, 0.05);
  CounterRng rng(3, 9);
  for (int i = 0; i < 500; ++i) {
    LpPoint x = afp.sample(rng);
    CHECK(distance(s, x, apply_map(s, rot, x)) <= 0.05 * (1.0 + 1e-9));
  }
}

TEST_CASE("hull of approximate fixed points stays approximate") {
  LpSpace s{2, 2.0};
  MapDescriptor rot = rotation_map({1.3}, 2.0);
  // delta chosen as xi(eps/9) for a synthetic table modulus at desk scale:
  // eta = 1/2 everywhere gives xi(t) = t/24.
  double eps = 0.9, delta = (eps / 9.0) / 24.0;
  Verdict v = convex_hull_afp_check(s, rot, delta, eps, 2000, 17);
  CHECK(v.passed);
  // Nonlinear member: projection onto a small off-center ball.
  MapDescriptor proj = projection_map({0.2, 0.0}, 0.3, 2.0);
  Verdict vp = convex_hull_afp_check(s, proj, delta, eps, 2000, 19);
  CHECK(vp.passed);
  // Far-too-loose delta lets combinations exceed eps/3: detector fires.
  Verdict bad = convex_hull_afp_check(s, rot, 1.2, eps, 2000, 17);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("type-gamma: identities, isometries, projections") {
  LpSpace s{3, 2.0};
  DerivedModuli d(ModulusSpec::hilbert(), 2.0);
  MapDescriptor ident = toward_map({0.0, 0.0, 0.0}, 0.0, 2.0);
  Verdict vi = type_gamma_check(s, ident, d, 2000, 23);
  CHECK(vi.passed);
  MapDescriptor rot = rotation_map({0.9}, 2.0);
  Verdict vr = type_gamma_check(s, rot, d, 2000, 23);
  CHECK(vr.passed);
  CHECK(std::abs(vr.worst_slack) <= 1e-9);  // linear isometry: equality
  MapDescriptor proj = projection_map({0.0, 0.0, 0.0}, 0.5, 2.0);
  Verdict vp = type_gamma_check(s, proj, d, 100000, 23);
  CHECK(vp.passed);
}

TEST_CASE("mu2 estimate: parallelogram keeps l2 under the bound") {
  LpSpace s{4, 2.0};
  double lambda = std::sqrt(3.0) / 2.0;
  Verdict v = mu2_estimate_check(s, lambda, 100000, 29);
  CHECK(v.passed);
  // The pure-ratio oracle values.
  CHECK(mu2_ratio(s, axis(4, 0), axis(4, 0)) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
  LpPoint zero(4, 0.0);
  CHECK(mu2_ratio(s, axis(4, 0), zero) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::isnan(mu2_ratio(s, zero, zero)));
  // l1 pairs push the ratio to 1 and break the same bound.
  Verdict bad = mu2_estimate_check({2, 1.0}, lambda, 100000, 29);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.witness.has_value());
  CHECK(mu2_ratio({2, 1.0}, bad.witness->points[0], bad.witness->points[1]) >
        0.5 * std::sqrt(2.0 * lambda * lambda + 2.0));
}

TEST_CASE("verdicts merge associatively and render deterministically") {
  LpSpace s{2, 1.0};
  Verdict a = nonsquare_check(s, 0.5, 500, 7);
  Verdict b = nonsquare_check(s, 0.5, 500, 8);
  Verdict ab = merge(a, b);
  CHECK(ab.trials == 1000);
  CHECK(ab.worst_slack == std::min(a.worst_slack, b.worst_slack));
  CHECK(render_text(a) == render_text(nonsquare_check(s, 0.5, 500, 7)));
  CHECK(verdict_csv_header() == "check,trials,worst_slack,passed");
  CHECK(verdict_csv_row(a).rfind("nonsquare,500,", 0) == 0);
}

TEST_CASE("every sampled checker reruns bit-identically under its seed") {
  LpSpace s2{3, 2.0};
  DerivedModuli d(ModulusSpec::hilbert(), 2.0);
  MapDescriptor rot = rotation_map({0.9}, 2.0);
  auto once = [&] {
    std::string all;
    all += render_text(nonsquare_check(s2, 0.2, 2000, 99));
    all += render_text(modulus_check(s2, ModulusSpec::hilbert(), 2000, 99));
    all += render_text(mu2_estimate_check(s2, 0.5, 2000, 99));
    all += render_text(type_gamma_check(s2, rot, d, 2000, 99));
    all += render_text(
        maurey_check(s2, {0.5, 0.5},
                     {axis(3, 0), LpPoint{-1.0, 0.0, 0.0}}, 64, 2.0, 1.0,
                     2000, 99));
    all += render_text(convex_hull_afp_check(s2, rot, 0.05, 0.9, 500, 99));
    return all;
  };
  CHECK(once() == once());
}
