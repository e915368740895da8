// cesaro: constants and rates for Cesaro-mean asymptotic regularity, plus
// desk-scale verifiers for the inequalities behind them.
//
// Exit codes: 0 success / all checks passed, 1 theorem-check violation or
// internal invariant failure, 2 usage or input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cesaro/magnitude.hpp"
#include "cesaro/modulus.hpp"
#include "cesaro/rademacher.hpp"
#include "cesaro/rates.hpp"
#include "cesaro/sampling.hpp"
#include "cesaro/spaces.hpp"
#include "cesaro/verify.hpp"

namespace {

using namespace cesaro;

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out << content;
}

// Flat key=value config: '#' comments, blank lines ignored. Values merge
// under explicit flags (a key the command line already carries is skipped).
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string config_path;
  std::vector<std::string> out;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw std::invalid_argument("--config needs a path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;

  std::set<std::string> present;
  for (const auto& a : out)
    if (a.rfind("--", 0) == 0) present.insert(a.substr(0, a.find('=')));

  std::ifstream in(config_path);
  if (!in)
    throw std::invalid_argument("cannot open config file '" + config_path + "'");
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || present.count("--" + key)) continue;
    if (value == "true")
      out.push_back("--" + key);
    else if (value != "false")
      out.push_back("--" + key + "=" + value);
  }
  return out;
}

std::vector<LpPoint> parse_point_list(const std::string& text) {
  std::vector<LpPoint> pts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ';'))
    if (!cur.empty()) pts.push_back(parse_point(cur));
  if (pts.empty()) throw std::invalid_argument("empty point list");
  return pts;
}

struct Options {
  std::string modulus, map, space = "l2:8", points, weights, x, envelope = "none";
  std::string output, format = "text", check;
  double delta = 0.0, theta = 0.5, eps = 0.0, b = 2.0, q = 0.0, Cq = 0.0;
  double lambda = -1.0, diam = 0.0, alpha_noise = 0.0;
  long long trials = 1000, nmax = 1000, seed = 0, stride = 1;
  long long mc_samples = 0, limit = 1000000;
  int n = 8, nvars = 2, ptilde = 100;
  bool hilbert_only = false, hilbert_compare = false;
  std::string config;  // consumed before CLI parsing; kept for --help
};

int run_pisier(const Options& opt) {
  double delta = opt.delta;
  if (!opt.modulus.empty()) {
    if (delta != 0.0)
      throw std::invalid_argument("give either --modulus or --delta, not both");
    delta = delta_from_modulus(ModulusSpec::parse(opt.modulus));
  }
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("delta must lie in (0, 1); supply --delta or --modulus");
  RademacherProfile prof = rademacher_profile(delta, opt.theta);
  if (opt.format == "csv") {
    std::string out =
        "delta,lambda,mu2_bound,xi,p_prime,p,theta,q,C_q,K_q,c_q,sum_constant\n";
    for (double v : {prof.delta, prof.lambda, prof.mu2_bound, prof.xi_prob,
                     prof.p_prime, prof.p_conj, prof.theta, prof.q, prof.C_q,
                     prof.K_q, prof.c_q})
      out += format_double(v) + ",";
    out += format_double(prof.sum_constant) + "\n";
    emit(opt.output, out);
  } else {
    emit(opt.output, render(prof));
  }
  return 0;
}

int run_rate(const Options& opt) {
  if (opt.hilbert_only) {
    if (opt.eps <= 0.0 || opt.diam <= 0.0)
      throw std::invalid_argument("--hilbert-only needs --eps and --diam");
    emit(opt.output,
         "N=" + std::to_string(hilbert_rate(opt.eps, opt.diam)) + "\n");
    return 0;
  }
  if (opt.modulus.empty() || opt.eps <= 0.0 || opt.b <= 0.0)
    throw std::invalid_argument("rate needs --modulus, --eps and --b");
  ModulusSpec m = ModulusSpec::parse(opt.modulus);
  double q = opt.q, Cq = opt.Cq;
  if ((q == 0.0) != (Cq == 0.0))
    throw std::invalid_argument("--q and --Cq come as a pair");
  if (q == 0.0) {
    RademacherProfile prof =
        rademacher_profile(delta_from_modulus(m), opt.theta);
    q = prof.q;
    Cq = prof.C_q;
  }
  RatePlan plan = rate_plan(opt.eps, opt.b, m, q, Cq);
  std::string out;
  if (opt.format == "csv") {
    out = rate_plan_csv_header() + "\n" + rate_plan_csv_row(plan) + "\n";
  } else {
    out = render(plan);
    if (opt.hilbert_compare) {
      double diam = opt.diam > 0.0 ? opt.diam : opt.b;
      out += "hilbert_sqrt_rate=" +
             std::to_string(hilbert_rate(opt.eps, diam)) + "\n";
    }
  }
  emit(opt.output, out);
  return 0;
}

int run_verify(const Options& opt) {
  LpSpace space = parse_space(opt.space);
  std::uint64_t seed = static_cast<std::uint64_t>(opt.seed);
  Verdict verdict;

  auto sampled_batches = [&](auto&& per_batch) {
    if (!opt.points.empty()) return per_batch(parse_point_list(opt.points), 0);
    Verdict all;
    for (long long t = 0; t < opt.trials; ++t) {
      CounterRng rng(seed, static_cast<std::uint64_t>(t) + 0x5A17ull);
      std::vector<LpPoint> pts(opt.n);
      for (auto& p : pts) p = sample_lp_ball(space.dim, space.p_norm, 1.0, rng);
      all = merge(all, per_batch(pts, t));
    }
    return all;
  };

  if (opt.check == "rademacher") {
    if (opt.q <= 0.0 || opt.Cq <= 0.0)
      throw std::invalid_argument("verify rademacher needs --q and --Cq");
    verdict = sampled_batches([&](const std::vector<LpPoint>& pts, long long) {
      return opt.mc_samples > 0
                 ? rademacher_check_sampled(space, pts, opt.q, opt.Cq,
                                            opt.mc_samples, seed)
                 : rademacher_check(space, pts, opt.q, opt.Cq);
    });
  } else if (opt.check == "kahane") {
    if (opt.q <= 1.0)
      throw std::invalid_argument("verify kahane needs --q above 1");
    verdict = sampled_batches([&](const std::vector<LpPoint>& pts, long long) {
      return kahane_check(space, pts, opt.q);
    });
  } else if (opt.check == "nonsquare") {
    double delta = opt.delta;
    if (delta == 0.0 && !opt.modulus.empty())
      delta = delta_from_modulus(ModulusSpec::parse(opt.modulus));
    verdict = nonsquare_check(space, delta, opt.trials, seed);
  } else if (opt.check == "modulus") {
    if (opt.modulus.empty())
      throw std::invalid_argument("verify modulus needs --modulus");
    verdict =
        modulus_check(space, ModulusSpec::parse(opt.modulus), opt.trials, seed);
  } else if (opt.check == "meanzero") {
    if (opt.q <= 0.0 || opt.Cq <= 0.0)
      throw std::invalid_argument("verify meanzero needs --q and --Cq");
    verdict = sampled_batches([&](const std::vector<LpPoint>& pts, long long t) {
      std::vector<double> w;
      if (!opt.weights.empty()) {
        w = parse_point(opt.weights);
      } else {
        CounterRng rng(seed, static_cast<std::uint64_t>(t) + 0xF00Dull);
        w = sample_simplex(static_cast<int>(pts.size()), rng);
      }
      return mean_zero_sum_check(space, w, pts, opt.q, opt.Cq, opt.nvars,
                                 opt.limit, seed + t);
    });
  } else if (opt.check == "maurey") {
    if (opt.q <= 0.0 || opt.Cq <= 0.0)
      throw std::invalid_argument("verify maurey needs --q and --Cq");
    std::vector<LpPoint> pts;
    std::vector<double> w;
    if (!opt.points.empty()) {
      pts = parse_point_list(opt.points);
      w = opt.weights.empty()
              ? std::vector<double>(pts.size(), 1.0 / pts.size())
              : parse_point(opt.weights);
    } else {
      CounterRng rng(seed, 0xB00ull);
      pts.resize(opt.n);
      for (auto& p : pts) p = sample_lp_ball(space.dim, space.p_norm, 1.0, rng);
      w = sample_simplex(opt.n, rng);
    }
    verdict = maurey_check(space, w, pts, opt.ptilde, opt.q, opt.Cq, opt.trials,
                           seed);
  } else if (opt.check == "hull") {
    if (opt.map.empty() || opt.delta <= 0.0 || opt.eps <= 0.0)
      throw std::invalid_argument("verify hull needs --map, --delta and --eps");
    verdict = convex_hull_afp_check(space, parse_map(opt.map, opt.b), opt.delta,
                                    opt.eps, opt.trials, seed);
  } else if (opt.check == "typegamma") {
    if (opt.map.empty() || opt.modulus.empty())
      throw std::invalid_argument("verify typegamma needs --map and --modulus");
    DerivedModuli d(ModulusSpec::parse(opt.modulus), opt.b);
    verdict = type_gamma_check(space, parse_map(opt.map, opt.b), d, opt.trials,
                               seed);
  } else if (opt.check == "mu2") {
    double lambda = opt.lambda;
    if (lambda < 0.0 && !opt.modulus.empty())
      lambda = 1.0 - delta_from_modulus(ModulusSpec::parse(opt.modulus));
    if (lambda < 0.0)
      throw std::invalid_argument("verify mu2 needs --lambda or --modulus");
    verdict = mu2_estimate_check(space, lambda, opt.trials, seed);
  } else {
    throw std::invalid_argument("unknown check '" + opt.check + "'");
  }

  verdict.check = opt.check;
  if (opt.format == "csv")
    emit(opt.output, verdict_csv_header() + "\n" + verdict_csv_row(verdict) + "\n");
  else
    emit(opt.output, render_text(verdict));
  return verdict.passed ? 0 : 1;
}

int run_simulate(const Options& opt) {
  if (opt.map.empty() || opt.x.empty())
    throw std::invalid_argument("simulate needs --map and --x");
  LpSpace space = parse_space(opt.space);
  MapDescriptor map = parse_map(opt.map, opt.b);
  LpPoint x0 = parse_point(opt.x);
  auto trace = cesaro_run(space, map, x0, opt.nmax, opt.alpha_noise,
                          static_cast<std::uint64_t>(opt.seed), opt.stride);
  if (opt.envelope == "sqrt") {
    double diam = opt.diam > 0.0 ? opt.diam : opt.b;
    std::function<double(long long)> env = [diam](long long n) {
      return diam / std::sqrt(static_cast<double>(n));
    };
    emit(opt.output, trace_csv(trace, &env));
  } else {
    emit(opt.output, trace_csv(trace));
  }
  return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--output", opt.output, "write to this file instead of stdout");
  cmd->add_option("--format", opt.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  cmd->add_option("--config", opt.config,
                  "flat key=value file merged under explicit flags");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Rademacher-type constants of uniformly nonsquare spaces, rates of "
      "asymptotic regularity for Cesaro means, and desk-scale verifiers "
      "for the inequalities behind them"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* pisier = app.add_subcommand(
      "pisier", "extract Rademacher type (q, C_q) from a nonsquareness witness");
  pisier->add_option("--modulus", opt.modulus,
                     "hilbert | power:c=..,s=.. | table:<path>");
  pisier->add_option("--delta", opt.delta, "nonsquareness witness in (0,1)");
  pisier->add_option("--theta", opt.theta, "placement of q inside (1,p)");
  add_common(pisier, opt);

  CLI::App* rate = app.add_subcommand(
      "rate", "compute the asymptotic-regularity threshold N(eps)");
  rate->add_option("--modulus", opt.modulus, "modulus grammar");
  rate->add_option("--eps", opt.eps, "target residual");
  rate->add_option("--b", opt.b, "norm bound (domain inside the b/2 ball)");
  rate->add_option("--q", opt.q, "Rademacher type exponent (with --Cq)");
  rate->add_option("--Cq", opt.Cq, "Rademacher type constant (with --q)");
  rate->add_option("--theta", opt.theta, "q placement when deriving (q, C_q)");
  rate->add_flag("--hilbert-only", opt.hilbert_only,
                 "just the quadratic Hilbert rate (needs --eps, --diam)");
  rate->add_option("--diam", opt.diam, "diameter for the Hilbert comparison");
  rate->add_flag("--hilbert-compare", opt.hilbert_compare,
                 "append the sqrt-rate comparison line");
  add_common(rate, opt);

  CLI::App* verify = app.add_subcommand(
      "verify", "run an inequality verifier; exit 1 on any violation");
  verify
      ->add_option("check", opt.check,
                   "rademacher|kahane|nonsquare|modulus|meanzero|maurey|hull|"
                   "typegamma|mu2")
      ->required();
  verify->add_option("--space", opt.space, "l<p>:<dim>, e.g. l2:8 or linf:4");
  verify->add_option("--trials", opt.trials, "sampled trials or batches");
  verify->add_option("--seed", opt.seed, "base seed (trial i draws stream i)");
  verify->add_option("--n", opt.n, "points per sampled batch");
  verify->add_option("--q", opt.q, "type exponent");
  verify->add_option("--Cq", opt.Cq, "type constant");
  verify->add_option("--delta", opt.delta, "nonsquareness witness / afp radius");
  verify->add_option("--lambda", opt.lambda, "1 - delta for the mu2 bound");
  verify->add_option("--modulus", opt.modulus, "modulus grammar");
  verify->add_option("--map", opt.map, "map grammar, e.g. rotation:angle=1.5708");
  verify->add_option("--b", opt.b, "norm bound of the map domain");
  verify->add_option("--eps", opt.eps, "target residual (hull check)");
  verify->add_option("--ptilde", opt.ptilde, "summand count (maurey check)");
  verify->add_option("--nvars", opt.nvars, "variable count (meanzero check)");
  verify->add_option("--limit", opt.limit,
                     "exhaustive outcome cap before Monte Carlo (meanzero)");
  verify->add_option("--points", opt.points,
                     "explicit batch '1,0;0,1' instead of sampling");
  verify->add_option("--weights", opt.weights, "explicit convex weights");
  verify->add_option("--mc-samples", opt.mc_samples,
                     "sampled sign vectors for batches beyond the exhaustive cap");
  add_common(verify, opt);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "trace Cesaro-mean residuals of a catalogue map");
  simulate->add_option("--map", opt.map, "map grammar");
  simulate->add_option("--space", opt.space, "l<p>:<dim>");
  simulate->add_option("--x", opt.x, "start point, comma separated");
  simulate->add_option("--nmax", opt.nmax, "steps to run");
  simulate->add_option("--alpha-noise", opt.alpha_noise,
                       "orbit perturbation bound per step");
  simulate->add_option("--seed", opt.seed, "noise seed");
  simulate->add_option("--stride", opt.stride, "record every k-th step");
  simulate->add_option("--b", opt.b, "norm bound of the map domain");
  simulate->add_option("--envelope", opt.envelope, "none or sqrt")
      ->check(CLI::IsMember({"none", "sqrt"}));
  simulate->add_option("--diam", opt.diam, "diameter for the sqrt envelope");
  add_common(simulate, opt);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config(args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pisier->parsed()) return run_pisier(opt);
    if (rate->parsed()) return run_rate(opt);
    if (verify->parsed()) return run_verify(opt);
    if (simulate->parsed()) return run_simulate(opt);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::logic_error& e) {
    // Re-substitution invariants inside the pipelines: an internal defect,
    // not a usage problem.
    std::fprintf(stderr, "internal check failed: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
