#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include <json.hpp>

#include "retainer/io.hpp"
#include "retainer/sweep.hpp"

using namespace retainer;
using nlohmann::json;

TEST_CASE("routing instance round-trips through JSON") {
  RoutingInstance inst;
  inst.tasks = {{"transcribe", 0.5}, {"label", 1.25}};
  inst.groups = {{"generalists", 1.0, {"transcribe", "label"}},
                 {"audio", 0.75, {"transcribe"}}};
  inst.subscription_cap = 3;
  const json doc = io::to_json(inst);
  CHECK(doc["version"] == 1);
  CHECK(doc["kind"] == "routing_instance");
  CHECK(io::to_json(io::parse_routing_instance(doc)) == doc);

  RoutingInstance no_cap = inst;
  no_cap.subscription_cap.reset();
  const json doc2 = io::to_json(no_cap);
  CHECK_FALSE(doc2.contains("subscription_cap"));
  CHECK(io::to_json(io::parse_routing_instance(doc2)) == doc2);
}

TEST_CASE("routing instance parse errors") {
  CHECK_THROWS_AS(io::parse_routing_instance(json::array()), io::ParseError);
  CHECK_THROWS_AS(io::parse_routing_instance(json{{"kind", "routing_instance"}}),
                  io::ParseError); // no version
  CHECK_THROWS_AS(
      io::parse_routing_instance(json{{"version", 2}, {"kind", "routing_instance"}}),
      io::ParseError);
  CHECK_THROWS_AS(
      io::parse_routing_instance(json{{"version", 1}, {"kind", "sim_config"}}),
      io::ParseError); // wrong kind
  CHECK_THROWS_AS(io::parse_routing_instance(json{{"version", 1}}),
                  io::ParseError); // missing tasks
  json bad = {{"version", 1},
              {"tasks", json::array({{{"id", "t"}, {"lambda", "fast"}}})},
              {"groups", json::array()}};
  CHECK_THROWS_AS(io::parse_routing_instance(bad), io::ParseError);
}

TEST_CASE("sim config round-trips through JSON") {
  SimConfig cfg;
  cfg.params.lambda = 2.0;
  cfg.params.mu = 0.5;
  cfg.params.c = 7;
  cfg.params.wage = 0.25;
  cfg.params.abandon = 0.3;
  cfg.params.r_mean = 2.0;
  cfg.horizon = {Horizon::Kind::Tasks, 5000};
  cfg.seed = 99;
  cfg.warmup = 0.2;
  cfg.mode = SimMode::Abandonment;
  cfg.max_realerts = 12;
  cfg.response_latency = {LatencySpec::Kind::Exponential, 2.0, {}, true};
  CHECK(io::parse_sim_config(io::to_json(cfg)) == cfg);

  SimConfig tiered;
  tiered.params.lambda = 1.0;
  tiered.mode = SimMode::Tiered;
  tiered.tiers = {8, 4};
  tiered.respond_fraction = 0.75;
  CHECK(io::parse_sim_config(io::to_json(tiered)) == tiered);

  SimConfig pre;
  pre.params.lambda = 1.0;
  pre.mode = SimMode::Precruitment;
  pre.beta = 2.5;
  pre.patience = 30.0;
  CHECK(io::parse_sim_config(io::to_json(pre)) == pre);
}

TEST_CASE("sim config accepts flat parameter layout and defaults") {
  const json flat = {{"version", 1}, {"kind", "sim_config"},
                     {"lambda", 1.5}, {"mu", 2.0}};
  const SimConfig cfg = io::parse_sim_config(flat);
  CHECK(cfg.params.lambda == 1.5);
  CHECK(cfg.params.mu == 2.0);
  CHECK(cfg.params.c == 0);
  CHECK(cfg.mode == SimMode::Baseline);
  CHECK(cfg.horizon.kind == Horizon::Kind::Seconds);

  // latency given without r_mean: r_mean picks up the latency mean
  json with_latency = flat;
  with_latency["response_latency"] = {{"kind", "empirical"},
                                      {"samples", {1.0, 2.0, 3.0}}};
  CHECK(io::parse_sim_config(with_latency).params.r_mean == doctest::Approx(2.0));
}

TEST_CASE("sim config parse errors") {
  CHECK_THROWS_AS(io::parse_sim_config(json{{"version", 1}}), io::ParseError);
  json doc = {{"version", 1}, {"lambda", 1.0}, {"mu", 1.0}};
  json bad = doc;
  bad["mode"] = "psychic";
  CHECK_THROWS_AS(io::parse_sim_config(bad), io::ParseError);
  bad = doc;
  bad["horizon"] = {{"kind", "fortnights"}, {"value", 2.0}};
  CHECK_THROWS_AS(io::parse_sim_config(bad), io::ParseError);
  bad = doc;
  bad["response_latency"] = {{"kind", "uniform"}, {"mean", 1.0}};
  CHECK_THROWS_AS(io::parse_sim_config(bad), io::ParseError);
}

TEST_CASE("format_double uses 12 significant digits") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_double(1e-30) == "1e-30");
  CHECK(io::format_double(-42.0) == "-42");
}

TEST_CASE("sweep spec parsing: values, range, family") {
  const json doc = {{"version", 1},
                    {"kind", "sweep"},
                    {"variable", "c"},
                    {"values", {1, 2, 3}},
                    {"fixed", {{"rho", 0.5}}},
                    {"outputs", {"loss_prob", "expected_wait"}}};
  const SweepSpec spec = parse_sweep_spec(doc);
  CHECK(spec.values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(spec.fixed.at("rho") == 0.5);

  json ranged = doc;
  ranged.erase("values");
  ranged["range"] = {{"from", 1.0}, {"to", 5.0}, {"step", 2.0}};
  CHECK(parse_sweep_spec(ranged).values == std::vector<double>{1.0, 3.0, 5.0});

  json fam = doc;
  fam["family"] = {{"name", "rho"}, {"values", {0.5, 2.0}}};
  fam["fixed"] = json::object();
  const SweepSpec fspec = parse_sweep_spec(fam);
  CHECK(fspec.family_name == "rho");
  CHECK(fspec.family_values == std::vector<double>{0.5, 2.0});
}

TEST_CASE("sweep spec validation errors") {
  json doc = {{"version", 1},
              {"variable", "c"},
              {"values", {1, 2}},
              {"fixed", {{"rho", 0.5}}},
              {"outputs", {"loss_prob"}}};
  CHECK_NOTHROW(parse_sweep_spec(doc));

  json bad = doc;
  bad["variable"] = "zeta";
  CHECK_THROWS_AS(parse_sweep_spec(bad), io::ParseError);

  bad = doc;
  bad["values"] = json::array();
  CHECK_THROWS_AS(parse_sweep_spec(bad), io::ParseError);

  bad = doc;
  bad.erase("values");
  bad["range"] = {{"from", 5.0}, {"to", 1.0}};
  CHECK_THROWS_AS(parse_sweep_spec(bad), io::ParseError); // empty range

  bad = doc;
  bad["values"] = {3, 1, 2};
  CHECK_THROWS_AS(parse_sweep_spec(bad), io::ParseError); // not increasing

  bad = doc;
  bad["fixed"] = {{"c", 4.0}};
  CHECK_THROWS_AS(parse_sweep_spec(bad), io::ParseError); // swept var fixed too

  bad = doc;
  bad["outputs"] = {"loss_prob", "vibes"};
  try {
    parse_sweep_spec(bad);
    FAIL("expected ParseError");
  } catch (const io::ParseError &e) {
    // the error names the valid metrics so users can self-serve
    CHECK(std::string(e.what()).find("loss_prob") != std::string::npos);
    CHECK(std::string(e.what()).find("vibes") != std::string::npos);
  }
}

TEST_CASE("run_sweep emits a deterministic CSV") {
  SweepSpec spec;
  spec.variable = "c";
  spec.values = {1, 2, 3};
  spec.fixed = {{"rho", 0.5}};
  spec.outputs = {"loss_prob", "expected_idle"};
  const std::string csv = run_sweep(spec);
  CHECK(csv == run_sweep(spec)); // byte-stable
  CHECK(csv.substr(0, csv.find('\n')) == "c,loss_prob,expected_idle");
  CHECK(csv.back() == '\n');
  // rows: header + one per value
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  // first row carries pi(0.5, 1) = 1/3
  CHECK(csv.find("1,0.333333333333,") != std::string::npos);
}

TEST_CASE("run_sweep with a family variable emits one block per curve") {
  SweepSpec spec;
  spec.variable = "c";
  spec.values = {2, 4};
  spec.outputs = {"loss_prob"};
  spec.family_name = "rho";
  spec.family_values = {0.5, 2.0};
  const std::string csv = run_sweep(spec);
  CHECK(csv.substr(0, csv.find('\n')) == "rho,c,loss_prob");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.find("0.5,2,") != std::string::npos);
  CHECK(csv.find("2,4,") != std::string::npos);
}

TEST_CASE("sweep metrics cover the headline quantities") {
  const auto &names = sweep_metric_names();
  for (const char *required :
       {"loss_prob", "expected_wait", "total_cost", "approx_loss",
        "combined_loss_exact", "chernoff_exact", "precruit_rate", "optimal_pool"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());

  // metric needing a parameter the grid omits reports which one
  SweepSpec spec;
  spec.variable = "c";
  spec.values = {1};
  spec.outputs = {"combined_loss_exact"}; // needs k
  spec.fixed = {{"rho", 1.0}};
  CHECK_THROWS_AS(run_sweep(spec), io::ParseError);
}
