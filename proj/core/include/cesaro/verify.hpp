#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cesaro/modulus.hpp"
#include "cesaro/sampling.hpp"
#include "cesaro/spaces.hpp"

namespace cesaro {

/// Relative tolerance for every inequality check. The theorems are exact;
/// anything worse than this is a genuine violation, not float noise.
inline constexpr double kIneqTol = 1e-9;

/// Full input of the worst trial, enough to replay the inequality.
struct Witness {
  std::vector<LpPoint> points;
  std::vector<double> scalars;
  std::string note;
};

/// Outcome of a verifier. Slack is (rhs - lhs) normalized by
/// max(1, |lhs|, |rhs|), so passed is exactly worst_slack >= -kIneqTol.
struct Verdict {
  std::string check;
  bool passed = true;
  long long trials = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  long long worst_trial = -1;
  std::optional<Witness> witness;  // populated when a trial fails
};

/// Associative min-slack reduction (trial counts add).
Verdict merge(Verdict a, const Verdict& b);

std::string render_text(const Verdict& v);
std::string verdict_csv_header();  // check,trials,worst_slack,passed
std::string verdict_csv_row(const Verdict& v);

double normalized_slack(double lhs, double rhs);

// -- per-inequality slacks (replayable on explicit inputs) -------------------

/// Rademacher type (exhaustive over all 2^n sign patterns, n <= 20):
/// rhs - lhs of  E(||sum e_i x_i||^q)^(1/q) <= C_q (sum ||x_i||^q)^(1/q).
double rademacher_slack(const LpSpace& s, const std::vector<LpPoint>& points,
                        double q, double C_q);

/// Worse slack of the two moment-equivalence inequalities
/// m_1 <= m_q <= K_q m_1 (exhaustive).
double kahane_slack(const LpSpace& s, const std::vector<LpPoint>& points,
                    double q);

/// min(||x-y||, ||x+y||)/2 <= (1-delta) max(||x||, ||y||).
double nonsquare_slack(const LpSpace& s, const LpPoint& x, const LpPoint& y,
                       double delta);

/// ||x||,||y|| <= 1 and eps := ||x-y|| > 0  =>  ||(x+y)/2|| <= 1 - eta(eps).
/// +infinity when the premise is vacuous (eps == 0).
double modulus_slack(const LpSpace& s, const LpPoint& x, const LpPoint& y,
                     const ModulusSpec& m);

/// One sampled pair's contribution to the mu_2 estimate:
/// (1/2) sqrt((||x+y||^2 + ||x-y||^2)/2) / max(||x||, ||y||).
/// NaN for the zero pair (skipped by the estimator).
double mu2_ratio(const LpSpace& s, const LpPoint& x, const LpPoint& y);

/// Convexity-compatibility of T:
/// gamma(||T(l x1 + (1-l) x2) - (l Tx1 + (1-l) Tx2)||) <= ||x1-x2|| - ||Tx1-Tx2||.
double type_gamma_slack(const LpSpace& s, const MapDescriptor& map,
                        const DerivedModuli& d, const LpPoint& x1,
                        const LpPoint& x2, double lambda);

// -- exhaustive / sampled moment helpers -------------------------------------

/// E ||sum e_i x_i||^q over all 2^n sign patterns (n <= 20).
double rademacher_moment_exact(const LpSpace& s,
                               const std::vector<LpPoint>& points, double q);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the same moment over seeded sign vectors.
MomentEstimate rademacher_moment_sampled(const LpSpace& s,
                                         const std::vector<LpPoint>& points,
                                         double q, long long samples,
                                         std::uint64_t seed);

// -- checks -------------------------------------------------------------------

/// Exhaustive Rademacher type check of one batch (n <= 20 points).
Verdict rademacher_check(const LpSpace& s, const std::vector<LpPoint>& points,
                         double q, double C_q);

/// Documented sampled variant for n > 20.
Verdict rademacher_check_sampled(const LpSpace& s,
                                 const std::vector<LpPoint>& points, double q,
                                 double C_q, long long samples,
                                 std::uint64_t seed);

/// Exhaustive two-sided moment-equivalence check of one batch.
Verdict kahane_check(const LpSpace& s, const std::vector<LpPoint>& points,
                     double q);

/// Same chain with an explicit upper constant in place of the derived
/// K_q; sub-critical constants demonstrate the detector.
Verdict kahane_check(const LpSpace& s, const std::vector<LpPoint>& points,
                     double q, double k_upper);

/// Sampled pairs against the nonsquareness inequality for this delta.
Verdict nonsquare_check(const LpSpace& s, double delta, long long trials,
                        std::uint64_t seed);

/// Sampled unit-ball pairs against the uniform-convexity implication.
Verdict modulus_check(const LpSpace& s, const ModulusSpec& m, long long trials,
                      std::uint64_t seed);

/// Independent mean-zero sums built from a convex combination
/// x = sum lambda_j x_j: n_vars i.i.d. variables taking value
/// (x_j - x)/n_vars with probability lambda_j, checked against the
/// constant 2 C_q. Exhaustive while the outcome count fits
/// exhaustive_limit, seeded Monte Carlo (with reported standard error)
/// beyond.
Verdict mean_zero_sum_check(const LpSpace& s, const std::vector<double>& weights,
                            const std::vector<LpPoint>& points, double q,
                            double C_q, int n_vars, long long exhaustive_limit,
                            std::uint64_t seed);

/// Empirical-mean approximation of a convex combination by p_tilde
/// sampled summands; mean distance must stay within the type-derived
/// bound 2 C_q p_tilde^((1-q)/q) b plus three standard errors.
Verdict maurey_check(const LpSpace& s, const std::vector<double>& weights,
                     const std::vector<LpPoint>& points, int p_tilde, double q,
                     double C_q, long long trials, std::uint64_t seed);

/// Random convex combinations (up to 20 summands) of delta-approximate
/// fixed points of T stay eps/3-approximate.
Verdict convex_hull_afp_check(const LpSpace& s, const MapDescriptor& map,
                              double delta, double eps, long long samples,
                              std::uint64_t seed);

/// Sampled convexity-compatibility check of T against gamma.
Verdict type_gamma_check(const LpSpace& s, const MapDescriptor& map,
                         const DerivedModuli& d, long long trials,
                         std::uint64_t seed);

/// Supremum of sampled mu_2 ratios against (1/2) sqrt(2 lambda^2 + 2).
Verdict mu2_estimate_check(const LpSpace& s, double lambda, long long trials,
                           std::uint64_t seed);

// -- approximate fixed points --------------------------------------------------

/// Sample generator for F_delta(T) = {x : ||x - Tx|| <= delta}, anchored
/// at a catalogued fixed point; every emitted sample is verified to
/// satisfy the residual bound. Throws when no fixed point is known.
class ApproxFixedPointSampler {
 public:
  ApproxFixedPointSampler(const LpSpace& s, const MapDescriptor& map,
                          double delta);

  LpPoint sample(CounterRng& rng) const;
  double delta() const { return delta_; }

 private:
  LpSpace space_;
  MapDescriptor map_;
  double delta_;
  LpPoint anchor_;
};

}  // namespace cesaro
