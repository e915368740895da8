#include "cesaro/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace cesaro {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(mix64(seed + 0x9E3779B97F4A7C15ull) ^
            mix64(stream * 0xD6E8FEB86659FD93ull + 0xA5A5A5A5A5A5A5A5ull)) {}

std::uint64_t CounterRng::next_u64() {
  return mix64(base_ + (++counter_) * 0x9E3779B97F4A7C15ull);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_unit_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double r = std::sqrt(-2.0 * std::log(next_unit_pos()));
  double t = 2.0 * M_PI * next_unit();
  cached_normal_ = r * std::sin(t);
  has_cached_normal_ = true;
  return r * std::cos(t);
}

double CounterRng::next_exponential() { return -std::log(next_unit_pos()); }

double CounterRng::next_gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("next_gamma: shape <= 0");
  if (shape < 1.0) {
    double u = next_unit_pos();
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = next_normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = next_unit_pos();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

std::vector<double> sample_lp_ball(int dim, double p_norm, double radius,
                                   CounterRng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_lp_ball: dim < 1");
  std::vector<double> x(dim);
  if (std::isinf(p_norm)) {
    for (double& c : x) c = radius * (2.0 * rng.next_unit() - 1.0);
    return x;
  }
  // Barthe-Guedon-Mendelson-Naor: generalized normals plus one exponential.
  double total = rng.next_exponential();
  std::vector<double> mag(dim);
  for (int i = 0; i < dim; ++i) {
    mag[i] = rng.next_gamma(1.0 / p_norm);  // |g_i|^p
    total += mag[i];
  }
  double denom = std::pow(total, 1.0 / p_norm);
  for (int i = 0; i < dim; ++i) {
    double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
    x[i] = sign * radius * std::pow(mag[i], 1.0 / p_norm) / denom;
  }
  return x;
}

std::vector<double> sample_lp_sphere(int dim, double p_norm, double radius,
                                     CounterRng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_lp_sphere: dim < 1");
  std::vector<double> x(dim);
  if (std::isinf(p_norm)) {
    for (double& c : x) c = radius * (2.0 * rng.next_unit() - 1.0);
    // Push one uniformly chosen coordinate to the face.
    int face = static_cast<int>(rng.next_u64() % dim);
    double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
    x[face] = sign * radius;
    return x;
  }
  double total = 0.0;
  std::vector<double> mag(dim);
  for (int i = 0; i < dim; ++i) {
    mag[i] = rng.next_gamma(1.0 / p_norm);
    total += mag[i];
  }
  double denom = std::pow(total, 1.0 / p_norm);
  for (int i = 0; i < dim; ++i) {
    double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
    x[i] = sign * radius * std::pow(mag[i], 1.0 / p_norm) / denom;
  }
  return x;
}

std::vector<double> sample_simplex(int count, CounterRng& rng) {
  if (count < 1) throw std::invalid_argument("sample_simplex: count < 1");
  std::vector<double> w(count);
  double total = 0.0;
  for (double& v : w) {
    v = rng.next_exponential();
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace cesaro
