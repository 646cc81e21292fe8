// End-to-end checks against the built command-line binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string &args) {
  const std::string cmd =
      std::string(RETAINER_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string &name) {
  return std::string(RETAINER_TEST_DATA) + "/" + name;
}

bool contains(const std::string &haystack, const std::string &needle) {
  return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("analyze prints the closed-form metrics") {
  const RunResult r =
      run("analyze --lambda 1 --mu 1 --c 3 --c-task 10 --wage 0.01");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "loss_prob          0.0625"));
  CHECK(contains(r.out, "total_cost         0.645625"));
}

TEST_CASE("analyze structured output is valid JSON with the same numbers") {
  const RunResult r =
      run("--format structured analyze --lambda 1 --mu 1 --c 3 --c-task 10 "
          "--wage-per-hour 36");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"loss_prob\": 0.0625"));
  CHECK(contains(r.out, "\"total_cost\": 0.645625"));
}

TEST_CASE("wage unit flags are mutually exclusive") {
  const RunResult r = run(
      "analyze --lambda 1 --mu 1 --c 3 --wage 0.01 --wage-per-hour 36");
  CHECK(r.exit_code == 2);
}

TEST_CASE("optimize finds the smallest adequate pool") {
  const RunResult r = run("optimize --rho 0.5 --max-miss 0.05");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "c_star             3"));
  CHECK(contains(r.out, "binding_constraint miss-probability"));
}

TEST_CASE("optimize needs exactly one objective") {
  CHECK(run("optimize --rho 0.5").exit_code == 2);
  CHECK(run("optimize --rho 0.5 --max-miss 0.05 --min-cost").exit_code == 2);
}

TEST_CASE("optimize rejects out-of-domain targets") {
  CHECK(run("optimize --rho 0.5 --max-miss 0").exit_code == 4);
}

TEST_CASE("route solves the bundled instance") {
  const RunResult r = run("route " + data("routing_basic.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "worst_rho          1\n"));
  const RunResult base =
      run("route " + data("routing_basic.json") + " --baseline random");
  CHECK(base.exit_code == 0);
  CHECK(contains(base.out, "baseline (uniform random split)"));
}

TEST_CASE("route feasibility mode uses exit code 3 when infeasible") {
  const std::string inst = data("routing_basic.json");
  CHECK(run("route " + inst + " --rho 1.0").exit_code == 0);
  CHECK(run("route " + inst + " --rho 0.5").exit_code == 3);
}

TEST_CASE("route reports the uncovered task and exits 3") {
  const RunResult r = run("route " + data("routing_uncovered.json"));
  CHECK(r.exit_code == 3);
}

TEST_CASE("simulate repeats byte-identically for a fixed seed") {
  const std::string args =
      "--format csv simulate " + data("sim_baseline.json") + " --compare-analytic";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "analytic_loss"));
  CHECK(contains(a.out, "z_loss"));

  // a different seed gives a different sample path
  const RunResult c = run(args + " --seed 12345");
  CHECK(c.exit_code == 0);
  CHECK(c.out != a.out);
}

TEST_CASE("simulate with replications still succeeds") {
  const RunResult r =
      run("simulate " + data("sim_baseline.json") + " --replications 3");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "empty_pool_fraction"));
}

TEST_CASE("sweep emits the CSV grid") {
  const RunResult r = run("sweep " + data("sweep_loss.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "c,loss_prob,expected_wait\n"));
  CHECK(contains(r.out, "1,0.333333333333,"));
  CHECK(run("sweep " + data("sweep_loss.json")).out == r.out);
}

TEST_CASE("parse failures exit 2") {
  CHECK(run("simulate " + data("bad_version.json")).exit_code == 2);
  CHECK(run("simulate /nonexistent/file.json").exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("").exit_code == 2); // a subcommand is required
}
