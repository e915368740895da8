#include "cesaro/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cesaro/magnitude.hpp"
#include "cesaro/rademacher.hpp"

namespace cesaro {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

std::string join_point(const LpPoint& x) {
  std::string out;
  for (size_t i = 0; i < x.size(); ++i)
    out += (i ? "," : "") + format_double(x[i]);
  return out;
}

std::string join_points(const std::vector<LpPoint>& pts) {
  std::string out;
  for (size_t i = 0; i < pts.size(); ++i)
    out += (i ? "; " : "") + join_point(pts[i]);
  return out;
}

// Enumerates all 2^n sign assignments with one coordinate flip between
// consecutive visits (Gray order); fn sees the running signed sum. The
// running sum is re-accumulated periodically to keep float drift far
// below the check tolerance.
template <typename Fn>
void for_each_sign_sum(const std::vector<LpPoint>& points, int dim, Fn&& fn) {
  int n = static_cast<int>(points.size());
  std::vector<double> sum(dim, 0.0);
  std::vector<int> sgn(n, 1);
  for (const auto& p : points)
    for (int i = 0; i < dim; ++i) sum[i] += p[i];
  fn(sum);
  std::uint32_t total = 1u << n;
  for (std::uint32_t g = 1; g < total; ++g) {
    int bit = std::countr_zero(g);
    double f = -2.0 * sgn[bit];
    for (int i = 0; i < dim; ++i) sum[i] += f * points[bit][i];
    sgn[bit] = -sgn[bit];
    if ((g & 0xFFFu) == 0) {
      std::fill(sum.begin(), sum.end(), 0.0);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < dim; ++i) sum[i] += sgn[j] * points[j][i];
    }
    fn(sum);
  }
}

void require_batch(const LpSpace& s, const std::vector<LpPoint>& points,
                   int cap) {
  if (points.empty()) fail("check: empty point batch");
  if (static_cast<int>(points.size()) > cap)
    fail("check: batch larger than the exhaustive cap (use the sampled "
         "variant)");
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != s.dim) fail("check: dimension mismatch");
}

Verdict single_shot(std::string name, double slack, Witness w) {
  Verdict v;
  v.check = std::move(name);
  v.trials = 1;
  v.worst_slack = slack;
  v.worst_trial = 0;
  v.passed = slack >= -kIneqTol;
  if (!v.passed) v.witness = std::move(w);
  return v;
}

// Folds per-trial slacks into a Verdict; the witness builder is only
// invoked for the worst trial after the scan.
template <typename SlackFn, typename WitnessFn>
Verdict scan_trials(std::string name, long long trials, SlackFn&& slack_of,
                    WitnessFn&& witness_of) {
  Verdict v;
  v.check = std::move(name);
  v.trials = trials;
  for (long long t = 0; t < trials; ++t) {
    double s = slack_of(t);
    if (std::isnan(s)) continue;  // vacuous trial
    if (s < v.worst_slack) {
      v.worst_slack = s;
      v.worst_trial = t;
    }
  }
  v.passed = v.worst_slack >= -kIneqTol;
  if (!v.passed && v.worst_trial >= 0) v.witness = witness_of(v.worst_trial);
  return v;
}

}  // namespace

double normalized_slack(double lhs, double rhs) {
  return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

Verdict merge(Verdict a, const Verdict& b) {
  if (a.check.empty()) a.check = b.check;
  a.trials += b.trials;
  if (b.worst_slack < a.worst_slack) {
    a.worst_slack = b.worst_slack;
    a.worst_trial = b.worst_trial;
    a.witness = b.witness;
  }
  a.passed = a.worst_slack >= -kIneqTol;
  return a;
}

std::string render_text(const Verdict& v) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "check=%s\ntrials=%lld\nworst_slack=%s\npassed=%s\n",
                v.check.c_str(), v.trials, format_double(v.worst_slack).c_str(),
                v.passed ? "true" : "false");
  std::string out = buf;
  if (v.witness) {
    out += "worst_trial=" + std::to_string(v.worst_trial) + "\n";
    if (!v.witness->points.empty())
      out += "witness_points=" + join_points(v.witness->points) + "\n";
    if (!v.witness->scalars.empty()) {
      out += "witness_scalars=";
      for (size_t i = 0; i < v.witness->scalars.size(); ++i)
        out += (i ? "," : "") + format_double(v.witness->scalars[i]);
      out += "\n";
    }
    if (!v.witness->note.empty()) out += "witness_note=" + v.witness->note + "\n";
  }
  return out;
}

std::string verdict_csv_header() { return "check,trials,worst_slack,passed"; }

std::string verdict_csv_row(const Verdict& v) {
  return v.check + "," + std::to_string(v.trials) + "," +
         format_double(v.worst_slack) + "," + (v.passed ? "true" : "false");
}

// -- Rademacher / Kahane -------------------------------------------------------

double rademacher_moment_exact(const LpSpace& s,
                               const std::vector<LpPoint>& points, double q) {
  require_batch(s, points, 20);
  double acc = 0.0;
  for_each_sign_sum(points, s.dim, [&](const LpPoint& sum) {
    acc += std::pow(norm(s, sum), q);
  });
  return acc / std::pow(2.0, static_cast<double>(points.size()));
}

MomentEstimate rademacher_moment_sampled(const LpSpace& s,
                                         const std::vector<LpPoint>& points,
                                         double q, long long samples,
                                         std::uint64_t seed) {
  if (points.empty() || samples < 2) fail("rademacher_moment_sampled: bad input");
  int n = static_cast<int>(points.size());
  double acc = 0.0, acc2 = 0.0;
  LpPoint sum(s.dim);
  for (long long t = 0; t < samples; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    std::fill(sum.begin(), sum.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      double sgn = rng.next_unit() < 0.5 ? -1.0 : 1.0;
      for (int i = 0; i < s.dim; ++i) sum[i] += sgn * points[j][i];
    }
    double v = std::pow(norm(s, sum), q);
    acc += v;
    acc2 += v * v;
  }
  double mean = acc / static_cast<double>(samples);
  double var = std::max(0.0, acc2 / static_cast<double>(samples) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

double rademacher_slack(const LpSpace& s, const std::vector<LpPoint>& points,
                        double q, double C_q) {
  if (!(q >= 1.0)) fail("rademacher_slack: q must be >= 1");
  double lhs = std::pow(rademacher_moment_exact(s, points, q), 1.0 / q);
  double qsum = 0.0;
  for (const auto& p : points) qsum += std::pow(norm(s, p), q);
  double rhs = C_q * std::pow(qsum, 1.0 / q);
  return normalized_slack(lhs, rhs);
}

Verdict rademacher_check(const LpSpace& s, const std::vector<LpPoint>& points,
                         double q, double C_q) {
  double slack = rademacher_slack(s, points, q, C_q);
  Witness w{points, {q, C_q}, "q=" + format_double(q) + " C_q=" + format_double(C_q)};
  Verdict v = single_shot("rademacher", slack, std::move(w));
  v.trials = 1ll << points.size();  // sign patterns examined
  return v;
}

Verdict rademacher_check_sampled(const LpSpace& s,
                                 const std::vector<LpPoint>& points, double q,
                                 double C_q, long long samples,
                                 std::uint64_t seed) {
  if (!(q >= 1.0)) fail("rademacher_check_sampled: q must be >= 1");
  MomentEstimate est = rademacher_moment_sampled(s, points, q, samples, seed);
  double lhs = std::pow(est.value, 1.0 / q);
  double qsum = 0.0;
  for (const auto& p : points) qsum += std::pow(norm(s, p), q);
  double rhs = C_q * std::pow(qsum, 1.0 / q);
  Witness w{points,
            {q, C_q, est.std_error},
            "sampled moment " + format_double(est.value) + " +- " +
                format_double(est.std_error)};
  Verdict v = single_shot("rademacher_sampled", normalized_slack(lhs, rhs),
                          std::move(w));
  v.trials = samples;
  return v;
}

namespace {

double kahane_slack_with(const LpSpace& s, const std::vector<LpPoint>& points,
                         double q, double k_upper) {
  if (!(q > 1.0)) fail("kahane_slack: q must exceed 1");
  require_batch(s, points, 20);
  double acc1 = 0.0, accq = 0.0;
  for_each_sign_sum(points, s.dim, [&](const LpPoint& sum) {
    double nv = norm(s, sum);
    acc1 += nv;
    accq += std::pow(nv, q);
  });
  double patterns = std::pow(2.0, static_cast<double>(points.size()));
  double m1 = acc1 / patterns;
  double mq = std::pow(accq / patterns, 1.0 / q);
  return std::min(normalized_slack(m1, mq), normalized_slack(mq, k_upper * m1));
}

}  // namespace

double kahane_slack(const LpSpace& s, const std::vector<LpPoint>& points,
                    double q) {
  return kahane_slack_with(s, points, q, kahane_constant(q));
}

Verdict kahane_check(const LpSpace& s, const std::vector<LpPoint>& points,
                     double q, double k_upper) {
  require_batch(s, points, 20);
  double slack = kahane_slack_with(s, points, q, k_upper);
  Witness w{points,
            {q, k_upper},
            "q=" + format_double(q) + " K=" + format_double(k_upper)};
  Verdict v = single_shot("kahane", slack, std::move(w));
  v.trials = 1ll << points.size();
  return v;
}

Verdict kahane_check(const LpSpace& s, const std::vector<LpPoint>& points,
                     double q) {
  return kahane_check(s, points, q, kahane_constant(q));
}

// -- nonsquareness / modulus ----------------------------------------------------

double nonsquare_slack(const LpSpace& s, const LpPoint& x, const LpPoint& y,
                       double delta) {
  LpPoint diff(x.size()), sum(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    diff[i] = x[i] - y[i];
    sum[i] = x[i] + y[i];
  }
  double lhs = 0.5 * std::min(norm(s, diff), norm(s, sum));
  double rhs = (1.0 - delta) * std::max(norm(s, x), norm(s, y));
  return normalized_slack(lhs, rhs);
}

Verdict nonsquare_check(const LpSpace& s, double delta, long long trials,
                        std::uint64_t seed) {
  if (!(delta > 0.0) || delta > 1.0) fail("nonsquare_check: delta outside (0, 1]");
  auto pair_at = [&](long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    LpPoint x = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
    LpPoint y = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
    return std::make_pair(std::move(x), std::move(y));
  };
  return scan_trials(
      "nonsquare", trials,
      [&](long long t) {
        auto [x, y] = pair_at(t);
        return nonsquare_slack(s, x, y, delta);
      },
      [&](long long t) {
        auto [x, y] = pair_at(t);
        return Witness{{x, y}, {delta}, "delta=" + format_double(delta)};
      });
}

double modulus_slack(const LpSpace& s, const LpPoint& x, const LpPoint& y,
                     const ModulusSpec& m) {
  double eps = distance(s, x, y);
  if (eps <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  LpPoint mid(x.size());
  for (size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + y[i]);
  return normalized_slack(norm(s, mid), 1.0 - m.eta(std::min(2.0, eps)));
}

Verdict modulus_check(const LpSpace& s, const ModulusSpec& m, long long trials,
                      std::uint64_t seed) {
  auto pair_at = [&](long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    LpPoint x = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
    LpPoint y = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
    return std::make_pair(std::move(x), std::move(y));
  };
  return scan_trials(
      "modulus", trials,
      [&](long long t) {
        auto [x, y] = pair_at(t);
        return modulus_slack(s, x, y, m);
      },
      [&](long long t) {
        auto [x, y] = pair_at(t);
        return Witness{{x, y}, {distance(s, x, y)}, m.describe()};
      });
}

// -- mean-zero sums --------------------------------------------------------------

namespace {

struct MeanZeroSetup {
  std::vector<LpPoint> values;  // (x_j - xbar) / n_vars
  std::vector<double> weights;
  double rhs = 0.0;  // 2 C_q (n_vars * E ||X||^q)^(1/q)
};

MeanZeroSetup mean_zero_setup(const LpSpace& s,
                              const std::vector<double>& weights,
                              const std::vector<LpPoint>& points, double q,
                              double C_q, int n_vars) {
  if (weights.size() != points.size() || points.empty())
    fail("mean_zero_sum_check: weights and points must match");
  if (n_vars < 1) fail("mean_zero_sum_check: n_vars must be >= 1");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) fail("mean_zero_sum_check: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail("mean_zero_sum_check: weights must form a convex combination");
  MeanZeroSetup setup;
  setup.weights = weights;
  LpPoint xbar(s.dim, 0.0);
  for (size_t j = 0; j < points.size(); ++j)
    for (int i = 0; i < s.dim; ++i) xbar[i] += weights[j] * points[j][i];
  setup.values.resize(points.size(), LpPoint(s.dim));
  double moment = 0.0;
  for (size_t j = 0; j < points.size(); ++j) {
    for (int i = 0; i < s.dim; ++i)
      setup.values[j][i] = (points[j][i] - xbar[i]) / n_vars;
    moment += weights[j] * std::pow(norm(s, setup.values[j]), q);
  }
  setup.rhs = 2.0 * C_q * std::pow(n_vars * moment, 1.0 / q);
  return setup;
}

}  // namespace

Verdict mean_zero_sum_check(const LpSpace& s, const std::vector<double>& weights,
                            const std::vector<LpPoint>& points, double q,
                            double C_q, int n_vars, long long exhaustive_limit,
                            std::uint64_t seed) {
  MeanZeroSetup setup = mean_zero_setup(s, weights, points, q, C_q, n_vars);
  size_t m = points.size();
  double outcomes = std::pow(static_cast<double>(m), n_vars);

  Verdict v;
  v.check = "mean_zero_sum";
  if (outcomes <= static_cast<double>(exhaustive_limit)) {
    // Exact expectation over the product distribution, odometer order.
    std::vector<int> idx(n_vars, 0);
    LpPoint sum(s.dim, 0.0);
    for (int k = 0; k < n_vars; ++k)
      for (int i = 0; i < s.dim; ++i) sum[i] += setup.values[0][i];
    double acc = 0.0;
    long long count = 0;
    for (;;) {
      double prob = 1.0;
      for (int k = 0; k < n_vars; ++k) prob *= setup.weights[idx[k]];
      acc += prob * std::pow(norm(s, sum), q);
      ++count;
      int pos = 0;
      while (pos < n_vars) {
        for (int i = 0; i < s.dim; ++i) sum[i] -= setup.values[idx[pos]][i];
        idx[pos] = (idx[pos] + 1) % static_cast<int>(m);
        for (int i = 0; i < s.dim; ++i) sum[i] += setup.values[idx[pos]][i];
        if (idx[pos] != 0) break;
        ++pos;
      }
      if (pos == n_vars) break;
    }
    double lhs = std::pow(acc, 1.0 / q);
    v.trials = count;
    v.worst_slack = normalized_slack(lhs, setup.rhs);
    v.worst_trial = 0;
  } else {
    // Seeded Monte Carlo over the product distribution.
    long long samples = exhaustive_limit;
    double acc = 0.0, acc2 = 0.0;
    LpPoint sum(s.dim);
    std::vector<double> cdf(m);
    double run = 0.0;
    for (size_t j = 0; j < m; ++j) {
      run += setup.weights[j];
      cdf[j] = run;
    }
    for (long long t = 0; t < samples; ++t) {
      CounterRng rng(seed, static_cast<std::uint64_t>(t));
      std::fill(sum.begin(), sum.end(), 0.0);
      for (int k = 0; k < n_vars; ++k) {
        double u = rng.next_unit();
        size_t j = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (j >= m) j = m - 1;
        for (int i = 0; i < s.dim; ++i) sum[i] += setup.values[j][i];
      }
      double val = std::pow(norm(s, sum), q);
      acc += val;
      acc2 += val * val;
    }
    double mean = acc / static_cast<double>(samples);
    double se = std::sqrt(std::max(0.0, acc2 / samples - mean * mean) /
                          static_cast<double>(samples));
    double lhs = std::pow(mean, 1.0 / q);
    v.trials = samples;
    v.worst_slack = normalized_slack(lhs, setup.rhs);
    v.worst_trial = 0;
    // The standard error travels with the verdict either way; a Monte
    // Carlo bound without it is not interpretable.
    char note[96];
    std::snprintf(note, sizeof note, "monte carlo: moment %.6g +- %.3g", mean,
                  se);
    v.witness = Witness{{}, {mean, se}, note};
    v.passed = v.worst_slack >= -kIneqTol;
    return v;
  }
  v.passed = v.worst_slack >= -kIneqTol;
  if (!v.passed)
    v.witness = Witness{points, {q, C_q, static_cast<double>(n_vars)},
                        "exhaustive mean-zero sum"};
  return v;
}

// -- Maurey empirical approximation ----------------------------------------------

Verdict maurey_check(const LpSpace& s, const std::vector<double>& weights,
                     const std::vector<LpPoint>& points, int p_tilde, double q,
                     double C_q, long long trials, std::uint64_t seed) {
  if (weights.size() != points.size() || points.empty())
    fail("maurey_check: weights and points must match");
  if (p_tilde < 1 || p_tilde > 10000)
    fail("maurey_check: p_tilde must lie in [1, 10^4]");
  if (trials < 2) fail("maurey_check: needs at least 2 trials");
  double b = 0.0;
  for (const auto& p : points) b = std::max(b, 2.0 * norm(s, p));
  LpPoint target(s.dim, 0.0);
  for (size_t j = 0; j < points.size(); ++j)
    for (int i = 0; i < s.dim; ++i) target[i] += weights[j] * points[j][i];
  std::vector<double> cdf(points.size());
  double run = 0.0;
  for (size_t j = 0; j < points.size(); ++j) {
    run += weights[j];
    cdf[j] = run;
  }
  if (std::abs(run - 1.0) > 1e-12)
    fail("maurey_check: weights must form a convex combination");

  double acc = 0.0, acc2 = 0.0;
  LpPoint mean(s.dim);
  for (long long t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    std::fill(mean.begin(), mean.end(), 0.0);
    for (int k = 0; k < p_tilde; ++k) {
      double u = rng.next_unit();
      size_t j = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      if (j >= points.size()) j = points.size() - 1;
      for (int i = 0; i < s.dim; ++i) mean[i] += points[j][i] / p_tilde;
    }
    double dist = distance(s, mean, target);
    acc += dist;
    acc2 += dist * dist;
  }
  double mean_dist = acc / static_cast<double>(trials);
  double se = std::sqrt(std::max(0.0, acc2 / trials - mean_dist * mean_dist) /
                        static_cast<double>(trials));
  double bound =
      2.0 * C_q * std::pow(static_cast<double>(p_tilde), (1.0 - q) / q) * b;

  Verdict v;
  v.check = "maurey";
  v.trials = trials;
  v.worst_slack = normalized_slack(mean_dist, bound + 3.0 * se);
  v.worst_trial = 0;
  v.passed = v.worst_slack >= -kIneqTol;
  if (!v.passed) {
    char note[128];
    std::snprintf(note, sizeof note,
                  "mean distance %.6g vs bound %.6g (+3se %.3g)", mean_dist,
                  bound, se);
    v.witness = Witness{points, {static_cast<double>(p_tilde), q, C_q}, note};
  }
  return v;
}

// -- approximate fixed points ------------------------------------------------------

ApproxFixedPointSampler::ApproxFixedPointSampler(const LpSpace& s,
                                                 const MapDescriptor& map,
                                                 double delta)
    : space_(s), map_(map), delta_(delta) {
  if (!(delta > 0.0)) fail("ApproxFixedPointSampler: delta must be > 0");
  auto fp = known_fixed_point(s, map);
  if (!fp)
    throw std::runtime_error(
        "ApproxFixedPointSampler: no catalogued fixed point for this map; "
        "cannot generate F_delta samples");
  anchor_ = *fp;
}

LpPoint ApproxFixedPointSampler::sample(CounterRng& rng) const {
  LpPoint spread =
      sample_lp_ball(space_.dim, space_.p_norm, 0.5 * map_.b, rng);
  auto at = [&](double t) {
    LpPoint p(anchor_.size());
    for (size_t i = 0; i < p.size(); ++i)
      p[i] = anchor_[i] + t * (spread[i] - anchor_[i]);
    return p;
  };
  auto residual = [&](const LpPoint& p) {
    return distance(space_, p, apply_map(space_, map_, p));
  };
  double cap = delta_ * (1.0 - 1e-12);
  LpPoint candidate = at(1.0);
  if (residual(candidate) <= cap) return candidate;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (residual(at(mid)) <= cap ? lo : hi) = mid;
  }
  return at(lo);
}

Verdict convex_hull_afp_check(const LpSpace& s, const MapDescriptor& map,
                              double delta, double eps, long long samples,
                              std::uint64_t seed) {
  if (!(eps > 0.0)) fail("convex_hull_afp_check: eps must be > 0");
  ApproxFixedPointSampler afp(s, map, delta);
  auto combo_at = [&](long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    int count = 1 + static_cast<int>(rng.next_u64() % 20);
    std::vector<double> w = sample_simplex(count, rng);
    LpPoint z(s.dim, 0.0);
    for (int j = 0; j < count; ++j) {
      LpPoint pt = afp.sample(rng);
      if (distance(s, pt, apply_map(s, map, pt)) > delta * (1.0 + kIneqTol))
        throw std::logic_error("convex_hull_afp_check: sampler emitted a bad point");
      for (int i = 0; i < s.dim; ++i) z[i] += w[j] * pt[i];
    }
    return z;
  };
  return scan_trials(
      "convex_hull_afp", samples,
      [&](long long t) {
        LpPoint z = combo_at(t);
        double res = distance(s, z, apply_map(s, map, z));
        return normalized_slack(res, eps / 3.0);
      },
      [&](long long t) {
        LpPoint z = combo_at(t);
        return Witness{{z},
                       {delta, eps},
                       "combination residual " +
                           format_double(distance(s, z, apply_map(s, map, z)))};
      });
}

// -- type (gamma) -----------------------------------------------------------------

double type_gamma_slack(const LpSpace& s, const MapDescriptor& map,
                        const DerivedModuli& d, const LpPoint& x1,
                        const LpPoint& x2, double lambda) {
  LpPoint blend(x1.size());
  for (size_t i = 0; i < x1.size(); ++i)
    blend[i] = lambda * x1[i] + (1.0 - lambda) * x2[i];
  LpPoint t1 = apply_map(s, map, x1);
  LpPoint t2 = apply_map(s, map, x2);
  LpPoint inner(x1.size());
  for (size_t i = 0; i < x1.size(); ++i)
    inner[i] = lambda * t1[i] + (1.0 - lambda) * t2[i];
  double defect = distance(s, apply_map(s, map, blend), inner);
  double lhs = d.gamma(defect);
  double rhs = distance(s, x1, x2) - distance(s, t1, t2);
  return normalized_slack(lhs, rhs);
}

Verdict type_gamma_check(const LpSpace& s, const MapDescriptor& map,
                         const DerivedModuli& d, long long trials,
                         std::uint64_t seed) {
  auto inputs_at = [&](long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    LpPoint x1 = sample_lp_ball(s.dim, s.p_norm, 0.5 * map.b, rng);
    LpPoint x2 = sample_lp_ball(s.dim, s.p_norm, 0.5 * map.b, rng);
    double lambda = rng.next_unit();
    return std::make_tuple(std::move(x1), std::move(x2), lambda);
  };
  return scan_trials(
      "type_gamma", trials,
      [&](long long t) {
        auto [x1, x2, lambda] = inputs_at(t);
        return type_gamma_slack(s, map, d, x1, x2, lambda);
      },
      [&](long long t) {
        auto [x1, x2, lambda] = inputs_at(t);
        return Witness{{x1, x2}, {lambda}, map_grammar(map)};
      });
}

// -- mu2 estimate -------------------------------------------------------------------

double mu2_ratio(const LpSpace& s, const LpPoint& x, const LpPoint& y) {
  double nx = norm(s, x), ny = norm(s, y);
  double top = std::max(nx, ny);
  if (top == 0.0) return std::numeric_limits<double>::quiet_NaN();
  LpPoint sum(x.size()), diff(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sum[i] = x[i] + y[i];
    diff[i] = x[i] - y[i];
  }
  double ns = norm(s, sum), nd = norm(s, diff);
  return 0.5 * std::sqrt(0.5 * (ns * ns + nd * nd)) / top;
}

Verdict mu2_estimate_check(const LpSpace& s, double lambda, long long trials,
                           std::uint64_t seed) {
  if (!(lambda >= 0.0) || lambda >= 1.0)
    fail("mu2_estimate_check: lambda must lie in [0, 1)");
  double bound = 0.5 * std::sqrt(2.0 * lambda * lambda + 2.0);
  auto pair_at = [&](long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    LpPoint x = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
    LpPoint y = sample_lp_ball(s.dim, s.p_norm, 1.0, rng);
    return std::make_pair(std::move(x), std::move(y));
  };
  Verdict v = scan_trials(
      "mu2_estimate", trials,
      [&](long long t) {
        auto [x, y] = pair_at(t);
        double r = mu2_ratio(s, x, y);
        return std::isnan(r) ? r : normalized_slack(r, bound);
      },
      [&](long long t) {
        auto [x, y] = pair_at(t);
        return Witness{{x, y},
                       {lambda, mu2_ratio(s, x, y)},
                       "ratio exceeds the mu2 bound"};
      });
  return v;
}

}  // namespace cesaro
