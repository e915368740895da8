#pragma once

#include <cstdint>
#include <vector>

namespace cesaro {

/// Counter-based generator: every output is a hash of (seed, stream,
/// counter), so trial i of a run can draw from stream i and reproduce
/// bit-exactly regardless of scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double next_unit();      // [0, 1)
  double next_unit_pos();  // (0, 1]
  double next_normal();
  double next_exponential();
  /// Gamma(shape, 1) for shape > 0 (Marsaglia-Tsang, with the boost step
  /// for shape < 1).
  double next_gamma(double shape);

 private:
  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Uniform sample from the closed p-ball of the given radius (p_norm may
/// be infinity, giving the cube). Exact for every p via the
/// Gamma/exponential representation of the p-ball measure.
std::vector<double> sample_lp_ball(int dim, double p_norm, double radius,
                                   CounterRng& rng);

/// Point of exact p-norm `radius` with generalized-Gaussian direction.
std::vector<double> sample_lp_sphere(int dim, double p_norm, double radius,
                                     CounterRng& rng);

/// Uniform point of the probability simplex (exponential-normalized).
std::vector<double> sample_simplex(int count, CounterRng& rng);

}  // namespace cesaro
