#include "cesaro/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cesaro/magnitude.hpp"
#include "cesaro/sampling.hpp"

namespace cesaro {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

void check_dim(const LpSpace& s, const LpPoint& x, const char* who) {
  if (static_cast<int>(x.size()) != s.dim)
    fail(std::string(who) + ": dimension mismatch");
}

}  // namespace

double norm(const LpSpace& s, const LpPoint& x) {
  check_dim(s, x, "norm");
  if (std::isinf(s.p_norm)) {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    return m;
  }
  if (s.p_norm == 2.0) {
    double acc = 0.0;
    for (double c : x) acc += c * c;
    return std::sqrt(acc);
  }
  if (s.p_norm == 1.0) {
    double acc = 0.0;
    for (double c : x) acc += std::abs(c);
    return acc;
  }
  double acc = 0.0;
  for (double c : x) acc += std::pow(std::abs(c), s.p_norm);
  return std::pow(acc, 1.0 / s.p_norm);
}

double distance(const LpSpace& s, const LpPoint& x, const LpPoint& y) {
  check_dim(s, x, "distance");
  check_dim(s, y, "distance");
  LpPoint d(x.size());
  for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return norm(s, d);
}

LpPoint parse_point(std::string_view csv) {
  LpPoint out;
  std::string buf(csv);
  char* cur = buf.data();
  while (*cur) {
    char* end = nullptr;
    double v = std::strtod(cur, &end);
    if (end == cur) fail("parse_point: cannot parse '" + buf + "'");
    out.push_back(v);
    cur = end;
    if (*cur == ',') ++cur;
    else if (*cur) fail("parse_point: junk in '" + buf + "'");
  }
  if (out.empty()) fail("parse_point: empty vector");
  return out;
}

LpSpace parse_space(std::string_view text) {
  if (text.size() < 2 || text[0] != 'l')
    fail("parse_space: expected l<p>:<dim>, e.g. l2:8");
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    fail("parse_space: expected l<p>:<dim>, e.g. l2:8");
  std::string ps(text.substr(1, colon - 1));
  std::string ds(text.substr(colon + 1));
  LpSpace s;
  if (ps == "inf") {
    s.p_norm = std::numeric_limits<double>::infinity();
  } else {
    char* end = nullptr;
    s.p_norm = std::strtod(ps.c_str(), &end);
    if (end == ps.c_str() || *end || !(s.p_norm >= 1.0))
      fail("parse_space: p must be >= 1 or inf");
  }
  char* end = nullptr;
  long d = std::strtol(ds.c_str(), &end, 10);
  if (end == ds.c_str() || *end || d < 1 || d > 1000000)
    fail("parse_space: bad dimension");
  s.dim = static_cast<int>(d);
  return s;
}

std::string space_name(const LpSpace& s) {
  char buf[48];
  if (std::isinf(s.p_norm))
    std::snprintf(buf, sizeof buf, "linf:%d", s.dim);
  else
    std::snprintf(buf, sizeof buf, "l%s:%d", format_double(s.p_norm).c_str(),
                  s.dim);
  return buf;
}

// -- constructors -------------------------------------------------------------

MapDescriptor rotation_map(std::vector<double> angles, double b) {
  if (angles.empty()) fail("rotation_map: needs at least one angle");
  if (!(b > 0.0)) fail("rotation_map: b must be > 0");
  return {Rotation{std::move(angles)}, b};
}

MapDescriptor toward_map(LpPoint target, double step, double b) {
  if (!(b > 0.0)) fail("toward_map: b must be > 0");
  if (!(step >= 0.0) || step > 1.0) fail("toward_map: step must lie in [0, 1]");
  return {TowardTarget{std::move(target), step}, b};
}

MapDescriptor projection_map(LpPoint center, double radius, double b) {
  if (!(b > 0.0)) fail("projection_map: b must be > 0");
  if (!(radius > 0.0)) fail("projection_map: radius must be > 0");
  return {BallProjection{std::move(center), radius}, b};
}

MapDescriptor compose_maps(std::vector<MapDescriptor> parts, double b) {
  if (parts.empty()) fail("compose_maps: empty composition");
  return {Composition{std::move(parts)}, b};
}

MapDescriptor convex_mix(std::vector<double> weights,
                         std::vector<MapDescriptor> parts, double b) {
  if (parts.empty() || weights.size() != parts.size())
    fail("convex_mix: weights and parts must match and be nonempty");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) fail("convex_mix: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) fail("convex_mix: weights must sum to 1");
  return {ConvexCombination{std::move(weights), std::move(parts)}, b};
}

// -- validation ---------------------------------------------------------------

void validate_map(const LpSpace& s, const MapDescriptor& m) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Rotation>) {
          if (s.p_norm != 2.0)
            fail("rotation maps are catalogued for p = 2 only");
          if (2 * static_cast<int>(k.angles.size()) > s.dim)
            fail("rotation: more 2-planes than the dimension allows");
        } else if constexpr (std::is_same_v<T, TowardTarget>) {
          check_dim(s, k.target, "toward");
          if (norm(s, k.target) > 0.5 * m.b * (1.0 + 1e-12))
            fail("toward: target outside the domain ball");
        } else if constexpr (std::is_same_v<T, BallProjection>) {
          if (s.p_norm != 2.0)
            fail("ball projections are catalogued for p = 2 only");
          check_dim(s, k.center, "project");
          if (norm(s, k.center) > 0.5 * m.b * (1.0 + 1e-12))
            fail("project: center outside the domain ball");
        } else if constexpr (std::is_same_v<T, Composition>) {
          for (const auto& part : k.parts) {
            MapDescriptor scoped = part;
            scoped.b = m.b;
            validate_map(s, scoped);
          }
        } else if constexpr (std::is_same_v<T, ConvexCombination>) {
          for (const auto& part : k.parts) {
            MapDescriptor scoped = part;
            scoped.b = m.b;
            validate_map(s, scoped);
          }
        }
      },
      m.kind);
}

// -- application --------------------------------------------------------------

LpPoint apply_map(const LpSpace& s, const MapDescriptor& m, const LpPoint& x) {
  check_dim(s, x, "apply_map");
  return std::visit(
      [&](const auto& k) -> LpPoint {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Rotation>) {
          LpPoint y = x;
          for (size_t plane = 0; plane < k.angles.size(); ++plane) {
            size_t i = 2 * plane, j = 2 * plane + 1;
            if (j >= y.size()) break;
            double c = std::cos(k.angles[plane]), sn = std::sin(k.angles[plane]);
            double xi = y[i], xj = y[j];
            y[i] = c * xi - sn * xj;
            y[j] = sn * xi + c * xj;
          }
          return y;
        } else if constexpr (std::is_same_v<T, TowardTarget>) {
          LpPoint y(x.size());
          for (size_t i = 0; i < x.size(); ++i)
            y[i] = x[i] + k.step * (k.target[i] - x[i]);
          return y;
        } else if constexpr (std::is_same_v<T, BallProjection>) {
          LpPoint d(x.size());
          for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - k.center[i];
          double dist = norm(s, d);
          double scale = dist <= k.radius ? 1.0 : k.radius / dist;
          LpPoint y(x.size());
          for (size_t i = 0; i < x.size(); ++i)
            y[i] = k.center[i] + scale * d[i];
          return y;
        } else if constexpr (std::is_same_v<T, Composition>) {
          LpPoint y = x;
          for (auto it = k.parts.rbegin(); it != k.parts.rend(); ++it)
            y = apply_map(s, *it, y);
          return y;
        } else {  // ConvexCombination
          LpPoint y(x.size(), 0.0);
          for (size_t p = 0; p < k.parts.size(); ++p) {
            LpPoint part = apply_map(s, k.parts[p], x);
            for (size_t i = 0; i < y.size(); ++i)
              y[i] += k.weights[p] * part[i];
          }
          return y;
        }
      },
      m.kind);
}

std::optional<LpPoint> known_fixed_point(const LpSpace& s,
                                         const MapDescriptor& m) {
  std::vector<LpPoint> candidates;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Rotation>) {
          candidates.emplace_back(s.dim, 0.0);
        } else if constexpr (std::is_same_v<T, TowardTarget>) {
          candidates.push_back(k.target);
        } else if constexpr (std::is_same_v<T, BallProjection>) {
          candidates.push_back(k.center);
        } else {
          candidates.emplace_back(s.dim, 0.0);
          for (const auto& part : k.parts)
            if (auto fp = known_fixed_point(s, part)) candidates.push_back(*fp);
        }
      },
      m.kind);
  for (const auto& c : candidates) {
    if (norm(s, c) > 0.5 * m.b * (1.0 + 1e-12)) continue;
    LpPoint image = apply_map(s, m, c);
    if (distance(s, c, image) <= 1e-12 * std::max(1.0, norm(s, c))) return c;
  }
  return std::nullopt;
}

// -- certification ------------------------------------------------------------

double max_lipschitz_excess(const LpSpace& s, const MapDescriptor& m,
                            int pairs, std::uint64_t seed) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < pairs; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    LpPoint x = sample_lp_ball(s.dim, s.p_norm, 0.5 * m.b, rng);
    LpPoint y = sample_lp_ball(s.dim, s.p_norm, 0.5 * m.b, rng);
    double before = distance(s, x, y);
    double after = distance(s, apply_map(s, m, x), apply_map(s, m, y));
    worst = std::max(worst, (after - before) / std::max(1.0, before));
  }
  return worst;
}

double max_domain_escape(const LpSpace& s, const MapDescriptor& m, int samples,
                         std::uint64_t seed) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    LpPoint x = sample_lp_ball(s.dim, s.p_norm, 0.5 * m.b, rng);
    worst = std::max(worst, norm(s, apply_map(s, m, x)) - 0.5 * m.b);
  }
  return worst;
}

// -- Cesaro iteration ----------------------------------------------------------

std::vector<TraceRow> cesaro_run(const LpSpace& s, const MapDescriptor& m,
                                 const LpPoint& x, long long n_max,
                                 double alpha_noise, std::uint64_t seed,
                                 long long stride) {
  check_dim(s, x, "cesaro_run");
  if (n_max < 1) fail("cesaro_run: n_max must be >= 1");
  if (stride < 1) fail("cesaro_run: stride must be >= 1");
  if (alpha_noise < 0.0) fail("cesaro_run: negative noise bound");
  validate_map(s, m);
  double radius = 0.5 * m.b;
  // Rounding lets a norm-preserving map drift by ~1 ulp per application, so
  // the escape threshold grows with the step count; genuine escapes are O(1).
  auto ensure_inside = [&](const LpPoint& p, long long step) {
    double slack = 1e-12 + 1e-15 * static_cast<double>(step);
    if (norm(s, p) > radius * (1.0 + slack)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "cesaro_run: orbit left the domain at step %lld "
                    "(norm %.17g > %.17g); map descriptor is broken",
                    step, norm(s, p), radius);
      throw std::runtime_error(buf);
    }
  };
  ensure_inside(x, 0);

  CounterRng noise_rng(seed, 0x6E6F697365ull);
  LpPoint orbit = x, mean = x;
  std::vector<TraceRow> trace;
  trace.reserve(static_cast<size_t>(
      std::min<long long>(n_max / stride + 2, 1 << 24)));
  for (long long n = 1; n <= n_max; ++n) {
    if (n > 1) {
      LpPoint next = apply_map(s, m, orbit);
      if (alpha_noise > 0.0) {
        LpPoint kick =
            sample_lp_sphere(s.dim, s.p_norm, alpha_noise, noise_rng);
        // Scale the kick back so the perturbed point stays inside the
        // domain; the perturbation norm stays <= alpha_noise.
        double lo = 0.0, hi = 1.0;
        auto shifted = [&](double t) {
          LpPoint p(next.size());
          for (size_t i = 0; i < p.size(); ++i) p[i] = next[i] + t * kick[i];
          return p;
        };
        if (norm(s, shifted(1.0)) <= radius) {
          lo = 1.0;
        } else {
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (norm(s, shifted(mid)) <= radius ? lo : hi) = mid;
          }
        }
        next = shifted(lo);
      }
      ensure_inside(next, n - 1);
      orbit = std::move(next);
      for (size_t i = 0; i < mean.size(); ++i)
        mean[i] += (orbit[i] - mean[i]) / static_cast<double>(n);
    }
    if (n % stride == 0 || n == 1 || n == n_max) {
      double residual = distance(s, mean, apply_map(s, m, mean));
      trace.push_back({n, residual});
    }
  }
  return trace;
}

std::vector<EnvelopeViolation> residual_envelope_check(
    const std::vector<TraceRow>& trace,
    const std::function<double(long long)>& envelope) {
  std::vector<EnvelopeViolation> bad;
  for (const auto& row : trace) {
    double bound = envelope(row.n);
    if (row.residual > bound + 1e-9) bad.push_back({row.n, row.residual, bound});
  }
  return bad;
}

std::string trace_csv(const std::vector<TraceRow>& trace,
                      const std::function<double(long long)>* envelope) {
  std::string out = envelope ? "n,residual,envelope\n" : "n,residual\n";
  char buf[96];
  for (const auto& row : trace) {
    if (envelope) {
      std::snprintf(buf, sizeof buf, "%lld,%s,%s\n", row.n,
                    format_double(row.residual).c_str(),
                    format_double((*envelope)(row.n)).c_str());
    } else {
      std::snprintf(buf, sizeof buf, "%lld,%s\n", row.n,
                    format_double(row.residual).c_str());
    }
    out += buf;
  }
  return out;
}

// -- grammar -------------------------------------------------------------------

namespace {

std::vector<std::string> split_top(std::string_view body, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : body) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_csv_list(std::string_view text, const char* who) {
  try {
    return parse_point(text);
  } catch (const std::exception&) {
    fail(std::string(who) + ": bad number list '" + std::string(text) + "'");
  }
}

}  // namespace

MapDescriptor parse_map(std::string_view text, double b) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    fail("parse_map: expected kind:args in '" + std::string(text) + "'");
  std::string kind(text.substr(0, colon));
  std::string body(text.substr(colon + 1));

  if (kind == "rotation") {
    if (body.rfind("angle=", 0) == 0)
      return rotation_map({std::stod(body.substr(6))}, b);
    if (body.rfind("angles=", 0) == 0)
      return rotation_map(parse_csv_list(body.substr(7), "rotation"), b);
    fail("rotation grammar: rotation:angle=<f> or rotation:angles=<f,..>");
  }
  if (kind == "toward") {
    double step = -1.0;
    LpPoint target;
    for (const auto& field : split_top(body, ',')) {
      // target consumes the rest once seen (its own commas included)
      if (field.rfind("step=", 0) == 0) step = std::stod(field.substr(5));
      else if (field.rfind("target=", 0) == 0) {
        auto pos = body.find("target=");
        target = parse_csv_list(body.substr(pos + 7), "toward");
        break;
      } else
        fail("toward grammar: toward:step=<f>,target=<f,..>");
    }
    if (step < 0.0 || target.empty())
      fail("toward grammar: toward:step=<f>,target=<f,..>");
    return toward_map(std::move(target), step, b);
  }
  if (kind == "project") {
    double radius = -1.0;
    LpPoint center;
    for (const auto& field : split_top(body, ',')) {
      if (field.rfind("radius=", 0) == 0) radius = std::stod(field.substr(7));
      else if (field.rfind("center=", 0) == 0) {
        auto pos = body.find("center=");
        center = parse_csv_list(body.substr(pos + 7), "project");
        break;
      } else
        fail("project grammar: project:radius=<f>,center=<f,..>");
    }
    if (radius <= 0.0 || center.empty())
      fail("project grammar: project:radius=<f>,center=<f,..>");
    return projection_map(std::move(center), radius, b);
  }
  if (kind == "compose" || kind == "mix") {
    std::vector<double> weights;
    std::string list = body;
    if (kind == "mix") {
      if (body.rfind("weights=", 0) != 0)
        fail("mix grammar: mix:weights=<f,..>;[<map>;..]");
      auto semi = body.find(";[");
      if (semi == std::string::npos)
        fail("mix grammar: mix:weights=<f,..>;[<map>;..]");
      weights = parse_csv_list(body.substr(8, semi - 8), "mix");
      list = body.substr(semi + 1);
    }
    if (list.size() < 2 || list.front() != '[' || list.back() != ']')
      fail("list grammar: expected [<map>;<map>;..]");
    std::vector<MapDescriptor> parts;
    for (const auto& item : split_top(
             std::string_view(list).substr(1, list.size() - 2), ';'))
      parts.push_back(parse_map(item, b));
    if (kind == "compose") return compose_maps(std::move(parts), b);
    return convex_mix(std::move(weights), std::move(parts), b);
  }
  fail("parse_map: unknown kind '" + kind + "'");
}

std::string map_grammar(const MapDescriptor& m) {
  return std::visit(
      [&](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        auto join = [](const std::vector<double>& v) {
          std::string out;
          for (size_t i = 0; i < v.size(); ++i)
            out += (i ? "," : "") + format_double(v[i]);
          return out;
        };
        if constexpr (std::is_same_v<T, Rotation>) {
          return "rotation:angles=" + join(k.angles);
        } else if constexpr (std::is_same_v<T, TowardTarget>) {
          return "toward:step=" + format_double(k.step) +
                 ",target=" + join(k.target);
        } else if constexpr (std::is_same_v<T, BallProjection>) {
          return "project:radius=" + format_double(k.radius) +
                 ",center=" + join(k.center);
        } else if constexpr (std::is_same_v<T, Composition>) {
          std::string out = "compose:[";
          for (size_t i = 0; i < k.parts.size(); ++i)
            out += (i ? ";" : "") + map_grammar(k.parts[i]);
          return out + "]";
        } else {
          std::string out = "mix:weights=" + join(k.weights) + ";[";
          for (size_t i = 0; i < k.parts.size(); ++i)
            out += (i ? ";" : "") + map_grammar(k.parts[i]);
          return out + "]";
        }
      },
      m.kind);
}

}  // namespace cesaro
