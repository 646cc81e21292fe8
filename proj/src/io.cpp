#include "retainer/io.hpp"

#include <cstdio>

namespace retainer::io {

namespace {

using nlohmann::json;

void check_header(const json &doc, const std::string &kind) {
  if (!doc.is_object())
    throw ParseError("config document must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kSchemaVersion)
    throw ParseError("missing or unsupported schema version (expected 1)");
  if (doc.contains("kind") && doc["kind"].get<std::string>() != kind)
    throw ParseError("document kind is not '" + kind + "'");
}

double require_number(const json &obj, const std::string &key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ParseError("missing numeric field '" + key + "'");
  return obj[key].get<double>();
}

} // namespace

RoutingInstance parse_routing_instance(const json &doc) {
  check_header(doc, "routing_instance");
  RoutingInstance inst;
  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw ParseError("routing instance needs a 'tasks' array");
  for (const auto &t : doc["tasks"]) {
    TaskType task;
    task.id = t.at("id").get<std::string>();
    task.lambda = require_number(t, "lambda");
    inst.tasks.push_back(task);
  }
  if (!doc.contains("groups") || !doc["groups"].is_array())
    throw ParseError("routing instance needs a 'groups' array");
  for (const auto &g : doc["groups"]) {
    WorkerGroup group;
    group.id = g.at("id").get<std::string>();
    group.mu = require_number(g, "mu");
    for (const auto &cap : g.at("capabilities"))
      group.capabilities.push_back(cap.get<std::string>());
    inst.groups.push_back(group);
  }
  if (doc.contains("subscription_cap"))
    inst.subscription_cap = doc["subscription_cap"].get<int>();
  return inst;
}

SimConfig parse_sim_config(const json &doc) {
  check_header(doc, "sim_config");
  SimConfig cfg;
  const json &p = doc.contains("params") ? doc["params"] : doc;
  cfg.params.lambda = require_number(p, "lambda");
  cfg.params.mu = require_number(p, "mu");
  if (p.contains("c"))
    cfg.params.c = p["c"].get<long long>();
  if (p.contains("wage"))
    cfg.params.wage = p["wage"].get<double>();
  if (p.contains("task_cost"))
    cfg.params.task_cost = p["task_cost"].get<double>();
  if (p.contains("abandon"))
    cfg.params.abandon = p["abandon"].get<double>();
  if (p.contains("alpha"))
    cfg.params.alpha = p["alpha"].get<double>();
  if (p.contains("r_mean"))
    cfg.params.r_mean = p["r_mean"].get<double>();

  if (doc.contains("horizon")) {
    const json &h = doc["horizon"];
    const std::string kind = h.at("kind").get<std::string>();
    if (kind == "seconds")
      cfg.horizon.kind = Horizon::Kind::Seconds;
    else if (kind == "tasks")
      cfg.horizon.kind = Horizon::Kind::Tasks;
    else
      throw ParseError("horizon kind must be 'seconds' or 'tasks'");
    cfg.horizon.value = require_number(h, "value");
  }
  if (doc.contains("seed"))
    cfg.seed = doc["seed"].get<uint64_t>();
  if (doc.contains("warmup"))
    cfg.warmup = doc["warmup"].get<double>();

  const std::string mode =
      doc.contains("mode") ? doc["mode"].get<std::string>() : "baseline";
  if (mode == "baseline")
    cfg.mode = SimMode::Baseline;
  else if (mode == "abandonment")
    cfg.mode = SimMode::Abandonment;
  else if (mode == "tiered")
    cfg.mode = SimMode::Tiered;
  else if (mode == "precruitment")
    cfg.mode = SimMode::Precruitment;
  else
    throw ParseError("unknown simulation mode '" + mode + "'");

  if (doc.contains("tiers"))
    for (const auto &t : doc["tiers"])
      cfg.tiers.push_back(t.get<long long>());
  if (doc.contains("beta"))
    cfg.beta = doc["beta"].get<double>();
  if (doc.contains("patience"))
    cfg.patience = doc["patience"].get<double>();
  if (doc.contains("max_realerts"))
    cfg.max_realerts = doc["max_realerts"].get<int>();
  if (doc.contains("respond_fraction"))
    cfg.respond_fraction = doc["respond_fraction"].get<double>();
  if (doc.contains("deterministic_recruitment"))
    cfg.deterministic_recruitment = doc["deterministic_recruitment"].get<bool>();

  if (doc.contains("response_latency")) {
    const json &l = doc["response_latency"];
    const std::string kind = l.at("kind").get<std::string>();
    cfg.response_latency.explicitly_set = true;
    if (kind == "point_mass") {
      cfg.response_latency.kind = LatencySpec::Kind::PointMass;
      cfg.response_latency.mean = require_number(l, "mean");
    } else if (kind == "exponential") {
      cfg.response_latency.kind = LatencySpec::Kind::Exponential;
      cfg.response_latency.mean = require_number(l, "mean");
    } else if (kind == "empirical") {
      cfg.response_latency.kind = LatencySpec::Kind::Empirical;
      for (const auto &s : l.at("samples"))
        cfg.response_latency.samples.push_back(s.get<double>());
    } else {
      throw ParseError("latency kind must be point_mass/exponential/empirical");
    }
    if (!p.contains("r_mean"))
      cfg.params.r_mean = cfg.response_latency.effective_mean();
  }
  return cfg;
}

json to_json(const RoutingInstance &instance) {
  json doc;
  doc["version"] = kSchemaVersion;
  doc["kind"] = "routing_instance";
  doc["tasks"] = json::array();
  for (const auto &t : instance.tasks)
    doc["tasks"].push_back({{"id", t.id}, {"lambda", t.lambda}});
  doc["groups"] = json::array();
  for (const auto &g : instance.groups)
    doc["groups"].push_back(
        {{"id", g.id}, {"mu", g.mu}, {"capabilities", g.capabilities}});
  if (instance.subscription_cap)
    doc["subscription_cap"] = *instance.subscription_cap;
  return doc;
}

json to_json(const SimConfig &config) {
  json doc;
  doc["version"] = kSchemaVersion;
  doc["kind"] = "sim_config";
  doc["params"] = {{"lambda", config.params.lambda}, {"mu", config.params.mu},
                   {"c", config.params.c},           {"wage", config.params.wage},
                   {"task_cost", config.params.task_cost},
                   {"abandon", config.params.abandon},
                   {"alpha", config.params.alpha},
                   {"r_mean", config.params.r_mean}};
  doc["horizon"] = {
      {"kind", config.horizon.kind == Horizon::Kind::Seconds ? "seconds" : "tasks"},
      {"value", config.horizon.value}};
  doc["seed"] = config.seed;
  doc["warmup"] = config.warmup;
  switch (config.mode) {
  case SimMode::Baseline:
    doc["mode"] = "baseline";
    break;
  case SimMode::Abandonment:
    doc["mode"] = "abandonment";
    break;
  case SimMode::Tiered:
    doc["mode"] = "tiered";
    doc["tiers"] = config.tiers;
    doc["respond_fraction"] = config.respond_fraction;
    break;
  case SimMode::Precruitment:
    doc["mode"] = "precruitment";
    doc["beta"] = config.beta;
    doc["patience"] = config.patience;
    break;
  }
  doc["max_realerts"] = config.max_realerts;
  doc["deterministic_recruitment"] = config.deterministic_recruitment;
  if (config.response_latency.explicitly_set) {
    json l;
    switch (config.response_latency.kind) {
    case LatencySpec::Kind::PointMass:
      l = {{"kind", "point_mass"}, {"mean", config.response_latency.mean}};
      break;
    case LatencySpec::Kind::Exponential:
      l = {{"kind", "exponential"}, {"mean", config.response_latency.mean}};
      break;
    case LatencySpec::Kind::Empirical:
      l = {{"kind", "empirical"}, {"samples", config.response_latency.samples}};
      break;
    }
    doc["response_latency"] = l;
  }
  return doc;
}

json to_json(const RoutingPlan &plan) {
  json doc;
  doc["worst_rho"] = plan.worst_rho;
  doc["per_task_rho"] = json::object();
  for (const auto &[task, rho] : plan.per_task_rho)
    doc["per_task_rho"][task] = rho;
  doc["assignments"] = json::array();
  for (const auto &[key, rate] : plan.assignments)
    doc["assignments"].push_back(
        {{"group", key.first}, {"task", key.second}, {"rate", rate}});
  return doc;
}

json to_json(const PoolMetrics &metrics) {
  return {{"loss_prob", metrics.loss_prob},
          {"busy_dist", metrics.busy_dist},
          {"expected_busy", metrics.expected_busy},
          {"expected_idle", metrics.expected_idle},
          {"expected_wait", metrics.expected_wait},
          {"retainer_cost_rate", metrics.retainer_cost_rate},
          {"total_cost", metrics.total_cost}};
}

json to_json(const SizingResult &result) {
  json doc;
  doc["c_star"] = result.c_star;
  doc["achieved_loss"] = result.achieved_loss;
  if (result.achieved_wait)
    doc["achieved_wait"] = *result.achieved_wait;
  if (result.objective)
    doc["objective"] = *result.objective;
  switch (result.binding) {
  case BindingConstraint::MissProbability:
    doc["binding_constraint"] = "miss-probability";
    break;
  case BindingConstraint::WaitTime:
    doc["binding_constraint"] = "wait-time";
    break;
  case BindingConstraint::Cost:
    doc["binding_constraint"] = "cost";
    break;
  }
  if (result.unbounded_warning)
    doc["unbounded_warning"] = true;
  return doc;
}

json to_json(const SimReport &report) {
  json doc;
  doc["tasks_arrived"] = report.tasks_arrived;
  doc["served"] = report.served;
  doc["diverted"] = report.diverted;
  doc["missed"] = report.missed;
  doc["sim_end_time"] = report.sim_end_time;
  doc["replications"] = report.replications;
  auto stat = [](const Stat &s) { return json{{"mean", s.mean}, {"se", s.se}}; };
  doc["empty_pool_fraction"] = stat(report.empty_pool_fraction);
  doc["mean_wait"] = stat(report.mean_wait);
  doc["mean_idle_workers"] = stat(report.mean_idle_workers);
  doc["cost_rate"] = report.cost_rate;
  doc["alerts_per_task"] = stat(report.alerts_per_task);
  if (report.precruited > 0) {
    doc["precruited"] = report.precruited;
    doc["dismissed"] = report.dismissed;
    doc["unmatched_fraction"] = stat(report.unmatched_fraction);
    doc["wasted_worker_fraction"] = stat(report.wasted_worker_fraction);
  }
  if (!report.per_tier.empty()) {
    doc["per_tier"] = json::array();
    for (const auto &t : report.per_tier)
      doc["per_tier"].push_back({{"arrivals", t.arrivals},
                                 {"served", t.served},
                                 {"mean_idle", t.mean_idle},
                                 {"cost_rate", t.cost_rate}});
  }
  return doc;
}

json to_json(const BufferScalingReport &report) {
  json doc;
  doc["rows"] = json::array();
  for (const auto &row : report.rows)
    doc["rows"].push_back({{"k", row.k},
                           {"pool_size", row.pool_size},
                           {"epsilon", row.epsilon},
                           {"buffer_workers", row.buffer_workers},
                           {"epsilon_ge_one", row.epsilon_ge_one}});
  doc["loglog_slope"] = report.loglog_slope;
  return doc;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

} // namespace retainer::io
