// retainer: analytic tooling for on-call crowd worker pools.
//
// Subcommands: analyze, optimize, route, simulate, sweep.
// Exit codes: 0 success, 2 usage/parse error, 3 infeasible instance,
// 4 numeric domain error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "retainer/erlang.hpp"
#include "retainer/io.hpp"
#include "retainer/optimizer.hpp"
#include "retainer/routing.hpp"
#include "retainer/sim.hpp"
#include "retainer/sweep.hpp"

namespace {

using nlohmann::json;
using namespace retainer;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitDomain = 4;

struct GlobalOpts {
  std::string format = "table"; // table | csv | structured
  std::string output_path;      // empty: stdout
  std::optional<uint64_t> seed;
};

void emit(const GlobalOpts &opts, const std::string &text) {
  if (opts.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.output_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open output file " + opts.output_path);
    out << text;
  }
}

json load_json(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw io::ParseError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw io::ParseError(std::string("invalid JSON: ") + e.what());
  }
  return doc;
}

// Wage flags share one target; at most one unit may be given.
struct WageFlags {
  std::optional<double> per_sec, per_min, per_hour;
  double resolve(double fallback) const {
    int given = int(bool(per_sec)) + int(bool(per_min)) + int(bool(per_hour));
    if (given > 1)
      throw CLI::ValidationError("wage", "give the wage in one unit only");
    if (per_sec)
      return *per_sec;
    if (per_min)
      return *per_min / 60.0;
    if (per_hour)
      return *per_hour / 3600.0;
    return fallback;
  }
};

void add_wage_flags(CLI::App *cmd, WageFlags &w) {
  cmd->add_option("--wage", w.per_sec, "retainer wage, currency per second");
  cmd->add_option("--wage-per-min", w.per_min, "retainer wage, currency per minute");
  cmd->add_option("--wage-per-hour", w.per_hour, "retainer wage, currency per hour");
}

std::string analyze_table(const RetainerParams &p, const PoolMetrics &m) {
  std::ostringstream out;
  out << "rho                " << io::format_double(p.rho()) << "\n"
      << "loss_prob          " << io::format_double(m.loss_prob) << "\n"
      << "expected_wait_s    " << io::format_double(m.expected_wait) << "\n"
      << "expected_busy      " << io::format_double(m.expected_busy) << "\n"
      << "expected_idle      " << io::format_double(m.expected_idle) << "\n"
      << "cost_rate_per_s    " << io::format_double(m.retainer_cost_rate) << "\n"
      << "total_cost         " << io::format_double(m.total_cost) << "\n";
  return out.str();
}

std::string sizing_table(const SizingResult &r) {
  std::ostringstream out;
  out << "c_star             " << r.c_star << "\n"
      << "achieved_loss      " << io::format_double(r.achieved_loss) << "\n";
  if (r.achieved_wait)
    out << "achieved_wait_s    " << io::format_double(*r.achieved_wait) << "\n";
  if (r.objective)
    out << "objective          " << io::format_double(*r.objective) << "\n";
  const char *binding = r.binding == BindingConstraint::MissProbability
                            ? "miss-probability"
                            : r.binding == BindingConstraint::WaitTime
                                  ? "wait-time"
                                  : "cost";
  out << "binding_constraint " << binding << "\n";
  if (r.unbounded_warning)
    out << "warning            wage 0: pool size is formally unbounded\n";
  return out.str();
}

std::string plan_text(const RoutingPlan &plan, const std::string &title) {
  std::ostringstream out;
  out << title << "\n";
  out << "worst_rho          " << io::format_double(plan.worst_rho) << "\n";
  for (const auto &[task, rho] : plan.per_task_rho)
    out << "rho[" << task << "]  " << io::format_double(rho) << "\n";
  out << "assignments (group -> task: rate)\n";
  for (const auto &[key, rate] : plan.assignments)
    if (rate > 0.0)
      out << "  " << key.first << " -> " << key.second << ": "
          << io::format_double(rate) << "\n";
  return out.str();
}

std::string report_csv(const SimReport &r, bool compare_analytic,
                       const SimConfig &cfg) {
  std::ostringstream out;
  out << "tasks_arrived,served,diverted,missed,empty_pool_fraction,"
         "empty_pool_se,mean_wait,mean_wait_se,mean_idle_workers,"
         "mean_idle_se,cost_rate,alerts_per_task,unmatched_fraction,"
         "wasted_worker_fraction";
  if (compare_analytic)
    out << ",analytic_loss,analytic_wait,analytic_idle,z_loss,z_wait,z_idle";
  out << "\n";
  out << r.tasks_arrived << "," << r.served << "," << r.diverted << ","
      << r.missed << "," << io::format_double(r.empty_pool_fraction.mean) << ","
      << io::format_double(r.empty_pool_fraction.se) << ","
      << io::format_double(r.mean_wait.mean) << ","
      << io::format_double(r.mean_wait.se) << ","
      << io::format_double(r.mean_idle_workers.mean) << ","
      << io::format_double(r.mean_idle_workers.se) << ","
      << io::format_double(r.cost_rate) << ","
      << io::format_double(r.alerts_per_task.mean) << ","
      << io::format_double(r.unmatched_fraction.mean) << ","
      << io::format_double(r.wasted_worker_fraction.mean);
  if (compare_analytic) {
    const double rho = cfg.params.rho();
    const double loss = erlang_loss(rho, cfg.params.c);
    const double wait = loss / cfg.params.mu;
    const double idle = static_cast<double>(cfg.params.c) - rho * (1.0 - loss);
    auto z = [](const Stat &s, double target) {
      return s.se > 0.0 ? (s.mean - target) / s.se : 0.0;
    };
    out << "," << io::format_double(loss) << "," << io::format_double(wait)
        << "," << io::format_double(idle) << ","
        << io::format_double(z(r.empty_pool_fraction, loss)) << ","
        << io::format_double(z(r.mean_wait, wait)) << ","
        << io::format_double(z(r.mean_idle_workers, idle));
  }
  out << "\n";
  return out.str();
}

std::string report_table(const SimReport &r) {
  std::ostringstream out;
  out << "tasks_arrived        " << r.tasks_arrived << "\n"
      << "served               " << r.served << "\n"
      << "diverted             " << r.diverted << "\n"
      << "missed               " << r.missed << "\n"
      << "empty_pool_fraction  " << io::format_double(r.empty_pool_fraction.mean)
      << " (se " << io::format_double(r.empty_pool_fraction.se) << ")\n"
      << "mean_wait_s          " << io::format_double(r.mean_wait.mean)
      << " (se " << io::format_double(r.mean_wait.se) << ")\n"
      << "mean_idle_workers    " << io::format_double(r.mean_idle_workers.mean)
      << " (se " << io::format_double(r.mean_idle_workers.se) << ")\n"
      << "cost_rate_per_s      " << io::format_double(r.cost_rate) << "\n";
  if (r.alerts_per_task.mean > 0.0)
    out << "alerts_per_task      " << io::format_double(r.alerts_per_task.mean)
        << " (se " << io::format_double(r.alerts_per_task.se) << ")\n";
  if (r.precruited > 0)
    out << "precruited           " << r.precruited << "\n"
        << "dismissed            " << r.dismissed << "\n"
        << "unmatched_fraction   " << io::format_double(r.unmatched_fraction.mean) << "\n"
        << "wasted_worker_frac   " << io::format_double(r.wasted_worker_fraction.mean) << "\n";
  for (size_t i = 0; i < r.per_tier.size(); ++i)
    out << "tier[" << i << "] arrivals=" << r.per_tier[i].arrivals
        << " served=" << r.per_tier[i].served
        << " cost_rate=" << io::format_double(r.per_tier[i].cost_rate) << "\n";
  return out.str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Retainer-pool analysis, sizing, routing and simulation"};
  app.require_subcommand(1);
  app.fallthrough(); // accept global options after the subcommand too

  GlobalOpts global;
  app.add_option("--format", global.format, "table, csv or structured")
      ->check(CLI::IsMember({"table", "csv", "structured"}));
  app.add_option("--output", global.output_path, "write output to this path");
  app.add_option("--seed", global.seed, "override RNG seed");

  // analyze
  auto *analyze = app.add_subcommand("analyze", "closed-form pool metrics");
  RetainerParams an_params;
  long long an_c = 0;
  WageFlags an_wage;
  bool an_per_time = false;
  analyze->add_option("--lambda", an_params.lambda, "task arrival rate /s")->required();
  analyze->add_option("--mu", an_params.mu, "worker recruitment rate /s")->required();
  analyze->add_option("--c", an_c, "pool size")->required();
  analyze->add_option("--c-task", an_params.task_cost, "cost per missed task");
  analyze->add_flag("--per-time", an_per_time,
                    "weight the miss cost by lambda (currency/s objective)");
  add_wage_flags(analyze, an_wage);

  // optimize
  auto *optimize = app.add_subcommand("optimize", "choose a pool size");
  double opt_rho = -1.0, opt_lambda = -1.0, opt_mu = -1.0;
  double opt_max_miss = -1.0, opt_max_wait = -1.0, opt_c_task = 0.0;
  bool opt_min_cost = false, opt_per_time = false;
  WageFlags opt_wage;
  optimize->add_option("--rho", opt_rho, "traffic intensity lambda/mu");
  optimize->add_option("--lambda", opt_lambda, "task arrival rate /s");
  optimize->add_option("--mu", opt_mu, "worker recruitment rate /s");
  optimize->add_option("--max-miss", opt_max_miss, "cap on miss probability");
  optimize->add_option("--max-wait", opt_max_wait, "cap on expected wait, s");
  optimize->add_flag("--min-cost", opt_min_cost, "minimize total cost");
  optimize->add_option("--c-task", opt_c_task, "cost per missed task");
  optimize->add_flag("--per-time", opt_per_time, "lambda-weighted miss cost");
  add_wage_flags(optimize, opt_wage);

  // route
  auto *route = app.add_subcommand("route", "assign worker groups to tasks");
  std::string route_file;
  std::string route_baseline;
  double route_rho = -1.0;
  route->add_option("instance", route_file, "routing instance JSON")->required();
  route->add_option("--baseline", route_baseline,
                    "also print a baseline plan ('random')")
      ->check(CLI::IsMember({"random"}));
  route->add_option("--rho", route_rho,
                    "feasibility check at this intensity instead of min-max");

  // simulate
  auto *simulate_cmd = app.add_subcommand("simulate", "discrete-event simulation");
  std::string sim_file;
  int sim_reps = 1;
  bool sim_compare = false;
  simulate_cmd->add_option("config", sim_file, "sim config JSON")->required();
  simulate_cmd->add_option("--replications", sim_reps, "independent runs (>= 2)");
  simulate_cmd->add_flag("--compare-analytic", sim_compare,
                         "append analytic targets and z-scores (csv)");

  // sweep
  auto *sweep_cmd = app.add_subcommand("sweep", "grid CSV for figure data");
  std::string sweep_file;
  sweep_cmd->add_option("spec", sweep_file, "sweep spec JSON")->required();

  try {
    app.parse(argc, argv);

    if (*analyze) {
      an_params.wage = an_wage.resolve(0.0);
      const auto conv = an_per_time ? CostConvention::PerTime : CostConvention::PerTask;
      const PoolMetrics m = pool_metrics(an_params, an_c, conv);
      if (global.format == "structured") {
        json doc = io::to_json(m);
        doc["rho"] = an_params.rho();
        emit(global, doc.dump(2) + "\n");
      } else {
        emit(global, analyze_table(an_params, m));
      }
      return kExitOk;
    }

    if (*optimize) {
      const int constraints = int(opt_max_miss >= 0.0) + int(opt_max_wait >= 0.0) +
                              int(opt_min_cost);
      if (constraints != 1)
        throw CLI::ValidationError(
            "constraint", "give exactly one of --max-miss, --max-wait, --min-cost");
      SizingResult result;
      if (opt_max_miss >= 0.0) {
        const double rho = opt_rho >= 0.0 ? opt_rho : opt_lambda / opt_mu;
        result = min_pool_for_miss_prob(rho, opt_max_miss);
      } else if (opt_max_wait >= 0.0) {
        if (opt_lambda < 0.0 || opt_mu <= 0.0)
          throw CLI::ValidationError("rates",
                                     "--max-wait needs --lambda and --mu");
        result = min_pool_for_wait(opt_lambda, opt_mu, opt_max_wait);
      } else {
        RetainerParams p;
        p.mu = opt_mu > 0.0 ? opt_mu : 1.0;
        p.lambda = opt_lambda >= 0.0 ? opt_lambda : opt_rho * p.mu;
        p.wage = opt_wage.resolve(1.0);
        p.task_cost = opt_c_task;
        result = optimize_total_cost(
            p, opt_per_time ? CostConvention::PerTime : CostConvention::PerTask);
      }
      emit(global, global.format == "structured"
                       ? io::to_json(result).dump(2) + "\n"
                       : sizing_table(result));
      return kExitOk;
    }

    if (*route) {
      const RoutingInstance inst = io::parse_routing_instance(load_json(route_file));
      if (route_rho > 0.0) {
        auto plan = feasible_assignment(inst, route_rho);
        if (!plan) {
          emit(global, "infeasible at rho " + io::format_double(route_rho) + "\n");
          return kExitInfeasible;
        }
        emit(global, global.format == "structured"
                         ? io::to_json(*plan).dump(2) + "\n"
                         : plan_text(*plan, "feasible plan"));
        return kExitOk;
      }
      const RoutingPlan best = min_max_intensity(inst);
      std::string text;
      json doc;
      if (global.format == "structured") {
        doc["optimal"] = io::to_json(best);
      } else {
        text = plan_text(best, "optimal plan");
      }
      if (route_baseline == "random") {
        const RoutingPlan base = random_assignment(inst);
        if (global.format == "structured")
          doc["baseline_random"] = io::to_json(base);
        else
          text += plan_text(base, "baseline (uniform random split)");
      }
      emit(global, global.format == "structured" ? doc.dump(2) + "\n" : text);
      return kExitOk;
    }

    if (*simulate_cmd) {
      SimConfig cfg = io::parse_sim_config(load_json(sim_file));
      if (global.seed)
        cfg.seed = *global.seed;
      const SimReport report =
          sim_reps > 1 ? replicate(cfg, sim_reps) : simulate(cfg);
      if (global.format == "structured")
        emit(global, io::to_json(report).dump(2) + "\n");
      else if (global.format == "csv")
        emit(global, report_csv(report, sim_compare, cfg));
      else
        emit(global, report_table(report));
      return kExitOk;
    }

    if (*sweep_cmd) {
      const SweepSpec spec = parse_sweep_spec(load_json(sweep_file));
      emit(global, run_sweep(spec));
      return kExitOk;
    }
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleRoutingError &e) {
    std::cerr << "error: " << e.what() << " (task " << e.task_id() << ")\n";
    return kExitInfeasible;
  } catch (const std::domain_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
