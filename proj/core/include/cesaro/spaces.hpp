#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cesaro {

/// Finite-dimensional l^p; p_norm may be infinity (max norm).
struct LpSpace {
  int dim = 1;
  double p_norm = 2.0;
};

using LpPoint = std::vector<double>;

double norm(const LpSpace& s, const LpPoint& x);
double distance(const LpSpace& s, const LpPoint& x, const LpPoint& y);
LpPoint parse_point(std::string_view csv);  // "1,0,-0.5"
LpSpace parse_space(std::string_view text); // "l2:8", "l1.5:3", "linf:4"
std::string space_name(const LpSpace& s);

// -- map catalogue ----------------------------------------------------------

struct MapDescriptor;

struct Rotation {
  std::vector<double> angles;  // one per coordinate 2-plane
};
struct TowardTarget {
  LpPoint target;
  double step = 0.0;  // in [0, 1]
};
struct BallProjection {
  LpPoint center;
  double radius = 0.0;
};
struct Composition {
  std::vector<MapDescriptor> parts;  // applied right to left
};
struct ConvexCombination {
  std::vector<double> weights;
  std::vector<MapDescriptor> parts;
};

/// A catalogued nonexpansive self-map of the closed ball of radius b/2.
/// Rotations and ball projections are restricted to p = 2 (radial
/// retraction in other l^p is only Lipschitz up to a constant).
struct MapDescriptor {
  std::variant<Rotation, TowardTarget, BallProjection, Composition,
               ConvexCombination>
      kind;
  double b = 2.0;  // the domain is the ball of radius b/2
};

MapDescriptor rotation_map(std::vector<double> angles, double b);
MapDescriptor toward_map(LpPoint target, double step, double b);
MapDescriptor projection_map(LpPoint center, double radius, double b);
MapDescriptor compose_maps(std::vector<MapDescriptor> parts, double b);
MapDescriptor convex_mix(std::vector<double> weights,
                         std::vector<MapDescriptor> parts, double b);

/// Grammar: `rotation:angle=<f>` / `rotation:angles=<f,f,..>`,
/// `toward:step=<f>,target=<f,..>`, `project:radius=<f>,center=<f,..>`,
/// `compose:[<map>;<map>;..]`, `mix:weights=<f,..>;[<map>;..]`.
MapDescriptor parse_map(std::string_view text, double b);
std::string map_grammar(const MapDescriptor& m);

/// Structural validation against a space (dimensions, p = 2 restrictions,
/// domain containment of anchor points). Throws std::invalid_argument.
void validate_map(const LpSpace& s, const MapDescriptor& m);

LpPoint apply_map(const LpSpace& s, const MapDescriptor& m, const LpPoint& x);

/// A fixed point this catalogue can name (rotation center, translation
/// target, projection center, or a common fixed point of the parts),
/// verified to machine precision before being returned.
std::optional<LpPoint> known_fixed_point(const LpSpace& s,
                                         const MapDescriptor& m);

/// Largest normalized expansion (||Tx-Ty|| - ||x-y||)/max(1, ||x-y||)
/// over sampled pairs from the domain; nonexpansiveness certification.
double max_lipschitz_excess(const LpSpace& s, const MapDescriptor& m,
                            int pairs, std::uint64_t seed);

/// Largest ||Tx|| - b/2 over sampled domain points; self-map certification.
double max_domain_escape(const LpSpace& s, const MapDescriptor& m,
                         int samples, std::uint64_t seed);

// -- Cesaro iteration --------------------------------------------------------

struct TraceRow {
  long long n = 0;
  double residual = 0.0;  // || mean_n - T(mean_n) ||
};

/// Runs the Cesaro mean of the orbit of x under T, keeping O(dim) state:
/// mean_{n+1} = mean_n + (orbit_n - mean_n)/(n+1). With alpha_noise > 0
/// each orbit step is perturbed by a seeded vector of norm <= alpha_noise
/// (clipped at the domain boundary so the orbit stays a self-map orbit).
/// Deterministic for a fixed seed. Throws if a point escapes the domain.
/// stride > 1 records (and computes) the residual only every stride steps
/// plus the first and last, keeping long runs cheap.
std::vector<TraceRow> cesaro_run(const LpSpace& s, const MapDescriptor& m,
                                 const LpPoint& x, long long n_max,
                                 double alpha_noise = 0.0,
                                 std::uint64_t seed = 0, long long stride = 1);

struct EnvelopeViolation {
  long long n = 0;
  double residual = 0.0;
  double bound = 0.0;
};

/// Every n whose residual exceeds envelope(n) + 1e-9; empty means pass.
std::vector<EnvelopeViolation> residual_envelope_check(
    const std::vector<TraceRow>& trace,
    const std::function<double(long long)>& envelope);

/// CSV `n,residual[,envelope]` with header.
std::string trace_csv(const std::vector<TraceRow>& trace,
                      const std::function<double(long long)>* envelope = nullptr);

}  // namespace cesaro
