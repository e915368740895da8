// End-to-end checks of the installed command surface: exit codes, output
// grammars, config merging and byte-identical reruns.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cesaro/magnitude.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(CESARO_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string value_of(const std::string& text, const std::string& key) {
  auto pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  auto end = text.find('\n', pos);
  return text.substr(pos + key.size() + 1, end - pos - key.size() - 1);
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("pisier: hilbert modulus profile") {
  RunResult r = run("pisier --modulus hilbert");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(value_of(r.out, "q")) == doctest::Approx(1.000423).epsilon(1e-4));
  CHECK(std::stod(value_of(r.out, "C_q")) == doctest::Approx(2.05e4).epsilon(1e-2));
}

TEST_CASE("pisier: delta validation exits 2") {
  RunResult r = run("pisier --delta 1.5");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("(0, 1)") != std::string::npos);
}

TEST_CASE("pisier: theta pushes q toward p") {
  RunResult lo = run("pisier --delta 0.25 --theta 0.1");
  RunResult hi = run("pisier --delta 0.25 --theta 0.9");
  double p = std::stod(value_of(hi.out, "p"));
  double q_lo = std::stod(value_of(lo.out, "q"));
  double q_hi = std::stod(value_of(hi.out, "q"));
  CHECK(q_lo < q_hi);
  CHECK(q_hi < p);
}

TEST_CASE("rate: desk-scale pipeline and magnitude grammar") {
  auto table = write_temp("cesaro_cli_const_half.txt", "2 0.5\n");
  RunResult r = run("rate --modulus table:" + table.string() +
                    " --eps 0.9 --b 1 --q 2 --Cq 3");
  CHECK(r.exit_code == 0);
  CHECK(value_of(r.out, "p_tilde") == "3600");
  CHECK(value_of(r.out, "N") == "10^(10^9939.96)");
  // Reported magnitudes re-parse under the text grammar.
  auto n = cesaro::parse_magnitude(value_of(r.out, "N"));
  CHECK(n.level() == 2);
  CHECK(n.mantissa() == doctest::Approx(9939.96).epsilon(1e-6));
  auto delta = cesaro::parse_magnitude(value_of(r.out, "delta"));
  CHECK(delta.level() == 1);
  CHECK(delta.branch() == cesaro::Branch::tiny);
}

TEST_CASE("rate: missing inputs exit 2") {
  CHECK(run("rate --modulus hilbert --b 1").exit_code == 2);
  CHECK(run("rate").exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("rate: hilbert shortcut") {
  RunResult r = run("rate --hilbert-only --eps 0.01 --diam 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "N=10000\n");
}

TEST_CASE("verify: rademacher passes on l2 and fails on the l1 square") {
  RunResult ok =
      run("verify rademacher --space l2:8 --n 10 --q 2 --Cq 3 --trials 200 "
          "--seed 7");
  CHECK(ok.exit_code == 0);
  RunResult bad =
      run("verify rademacher --space l1:2 --points '1,0;0,1' --q 2 --Cq 1");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("witness_points=1,0; 0,1") != std::string::npos);
}

TEST_CASE("verify: csv output") {
  RunResult r = run(
      "verify nonsquare --space l2:4 --modulus hilbert --trials 500 --seed 3 "
      "--format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("check,trials,worst_slack,passed\nnonsquare,500,", 0) == 0);
}

TEST_CASE("simulate: quarter turn hits the fixed point at n = 4") {
  RunResult r = run(
      "simulate --map rotation:angle=1.5707963267948966 --space l2:2 --x 1,0 "
      "--nmax 100");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("n,residual\n", 0) == 0);
  // Row n=4: the mean of the 4-cycle is the origin, a fixed point.
  auto pos = r.out.find("\n4,");
  REQUIRE(pos != std::string::npos);
  double res4 = std::stod(r.out.substr(pos + 3));
  CHECK(std::abs(res4) <= 1e-12);
}

TEST_CASE("simulate: envelope column") {
  RunResult r = run(
      "simulate --map rotation:angle=1.0 --space l2:2 --x 1,0 --nmax 10 "
      "--envelope sqrt --diam 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("n,residual,envelope\n", 0) == 0);
  CHECK(r.out.find("\n4,") != std::string::npos);
}

TEST_CASE("config files merge under explicit flags") {
  auto conf = write_temp("cesaro_cli_rate.conf",
                         "eps=0.9\nb=1\nq=2\nCq=3\n# comment line\n");
  auto table = write_temp("cesaro_cli_const_half2.txt", "2 0.5\n");
  RunResult from_conf = run("rate --modulus table:" + table.string() +
                            " --config " + conf.string());
  CHECK(from_conf.exit_code == 0);
  CHECK(value_of(from_conf.out, "p_tilde") == "3600");
  // An explicit flag beats the config value.
  RunResult overridden = run("rate --modulus table:" + table.string() +
                             " --config " + conf.string() + " --eps 1.8");
  CHECK(value_of(overridden.out, "eps") == "1.8");
  CHECK(value_of(overridden.out, "p_tilde") == "900");
}

TEST_CASE("csv renderings and file output") {
  RunResult prof = run("pisier --modulus hilbert --format csv");
  CHECK(prof.exit_code == 0);
  CHECK(prof.out.rfind("delta,lambda,mu2_bound,xi,p_prime,p,theta,q,C_q,K_q,"
                       "c_q,sum_constant\n",
                       0) == 0);

  auto table = write_temp("cesaro_cli_const_half3.txt", "2 0.5\n");
  RunResult plan = run("rate --modulus table:" + table.string() +
                       " --eps 0.9 --b 1 --q 2 --Cq 3 --format csv");
  CHECK(plan.exit_code == 0);
  CHECK(plan.out.rfind("eps,b,q,C_q,p_tilde,delta,p,alpha,N\n", 0) == 0);
  CHECK(plan.out.find(",3600,") != std::string::npos);

  auto out_path =
      std::filesystem::temp_directory_path() / "cesaro_cli_out.txt";
  std::filesystem::remove(out_path);
  RunResult to_file = run("rate --hilbert-only --eps 1 --diam 2 --output " +
                          out_path.string());
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(out_path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "N=4\n");
}

TEST_CASE("remaining verify subcommands run end to end") {
  CHECK(run("verify kahane --space l3:4 --n 6 --q 1.5 --trials 50 --seed 5")
            .exit_code == 0);
  CHECK(run("verify meanzero --space l2:3 --n 3 --q 2 --Cq 1 --nvars 3 "
            "--trials 50 --seed 5")
            .exit_code == 0);
  CHECK(run("verify maurey --space l2:2 --points '1,0;-1,0' "
            "--weights 0.5,0.5 --ptilde 100 --q 2 --Cq 1 --trials 500 "
            "--seed 5")
            .exit_code == 0);
  CHECK(run("verify hull --space l2:2 --map rotation:angle=1.3 --delta 0.004 "
            "--eps 0.9 --trials 200 --seed 5")
            .exit_code == 0);
  CHECK(run("verify typegamma --space l2:3 --map "
            "'project:radius=0.5,center=0,0,0' --modulus hilbert --b 2 "
            "--trials 500 --seed 5")
            .exit_code == 0);
  CHECK(run("verify mu2 --space l2:4 --modulus hilbert --trials 500 --seed 5")
            .exit_code == 0);
  // Usage problems exit 2.
  CHECK(run("verify rademacher --space l2:4").exit_code == 2);
  CHECK(run("verify hull --space l2:2 --delta 0.1 --eps 0.9").exit_code == 2);
  CHECK(run("verify nosuchcheck --trials 5").exit_code == 2);
}

TEST_CASE("identical invocations are byte-identical") {
  const std::string cmds[] = {
      "pisier --modulus hilbert",
      "verify modulus --space l2:6 --modulus hilbert --trials 400 --seed 11",
      "verify mu2 --space l2:4 --lambda 0.5 --trials 400 --seed 11",
      "simulate --map rotation:angle=0.7 --space l2:2 --x 0.5,0 --nmax 50 "
      "--alpha-noise 0.001 --seed 5",
  };
  for (const auto& c : cmds) {
    RunResult a = run(c), b = run(c);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
  }
}
