#include "retainer/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "retainer/erlang.hpp"
#include "retainer/io.hpp"
#include "retainer/optimizer.hpp"

namespace retainer {

namespace {

using Params = std::map<std::string, double>;

double get(const Params &p, const std::string &key) {
  auto it = p.find(key);
  if (it == p.end())
    throw io::ParseError("sweep metric needs parameter '" + key + "'");
  return it->second;
}

double get_or(const Params &p, const std::string &key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

double rho_of(const Params &p) {
  if (p.count("rho"))
    return p.at("rho");
  return get(p, "lambda") / get(p, "mu");
}

long long pool_of(const Params &p) {
  const double c = get(p, "c");
  if (c < 0 || c != std::floor(c))
    throw std::domain_error("pool size c must be a non-negative integer");
  return static_cast<long long>(c);
}

RetainerParams retainer_params_of(const Params &p) {
  RetainerParams rp;
  rp.mu = get_or(p, "mu", 1.0);
  rp.lambda = p.count("lambda") ? p.at("lambda") : rho_of(p) * rp.mu;
  rp.wage = get_or(p, "s", get_or(p, "wage", 1.0));
  rp.task_cost = get_or(p, "C_task", 0.0);
  return rp;
}

const std::map<std::string, std::function<double(const Params &)>> &metrics() {
  static const std::map<std::string, std::function<double(const Params &)>> m = {
      {"loss_prob", [](const Params &p) { return erlang_loss(rho_of(p), pool_of(p)); }},
      {"expected_wait",
       [](const Params &p) {
         const double mu = get_or(p, "mu", 1.0);
         return erlang_loss(rho_of(p), pool_of(p)) / mu;
       }},
      {"expected_busy",
       [](const Params &p) { return expected_busy(rho_of(p), pool_of(p)); }},
      {"expected_idle",
       [](const Params &p) {
         return static_cast<double>(pool_of(p)) - expected_busy(rho_of(p), pool_of(p));
       }},
      {"cost_rate",
       [](const Params &p) {
         return retainer_cost_rate(get_or(p, "s", get_or(p, "wage", 1.0)),
                                   rho_of(p), pool_of(p));
       }},
      {"total_cost",
       [](const Params &p) {
         return total_cost(retainer_params_of(p), pool_of(p), CostConvention::PerTask);
       }},
      {"total_cost_rate",
       [](const Params &p) {
         return total_cost(retainer_params_of(p), pool_of(p), CostConvention::PerTime);
       }},
      {"approx_loss",
       [](const Params &p) { return approx_loss(rho_of(p), pool_of(p)); }},
      {"combined_loss_exact",
       [](const Params &p) {
         return combined_pool_loss(rho_of(p), pool_of(p),
                                   static_cast<long long>(get(p, "k"))).exact;
       }},
      {"combined_loss_approx",
       [](const Params &p) {
         return combined_pool_loss(rho_of(p), pool_of(p),
                                   static_cast<long long>(get(p, "k"))).approx;
       }},
      {"chernoff_exact",
       [](const Params &p) {
         return chernoff_loss_estimate(get(p, "epsilon"), rho_of(p)).exact;
       }},
      {"chernoff_simplified",
       [](const Params &p) {
         return chernoff_loss_estimate(get(p, "epsilon"), rho_of(p)).simplified;
       }},
      {"precruit_rate",
       [](const Params &p) { return precruit_rate(get(p, "lambda"), get(p, "beta")); }},
      {"optimal_pool",
       [](const Params &p) {
         return static_cast<double>(
             optimize_total_cost(retainer_params_of(p)).c_star);
       }},
  };
  return m;
}

} // namespace

const std::vector<std::string> &sweep_metric_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto &[name, fn] : metrics())
      out.push_back(name);
    return out;
  }();
  return names;
}

void SweepSpec::validate() const {
  static const std::vector<std::string> variables = {"c",       "rho",  "k",
                                                     "epsilon", "beta", "C_task"};
  if (std::find(variables.begin(), variables.end(), variable) == variables.end())
    throw io::ParseError("unknown sweep variable '" + variable + "'");
  if (values.empty())
    throw io::ParseError("sweep range is empty");
  for (size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw io::ParseError("sweep range must be strictly increasing");
  if (fixed.count(variable))
    throw io::ParseError("swept variable '" + variable + "' repeated in fixed");
  if (!family_name.empty() && fixed.count(family_name))
    throw io::ParseError("family variable repeated in fixed");
  if (outputs.empty())
    throw io::ParseError("sweep needs at least one output metric");
  for (const auto &name : outputs)
    if (!metrics().count(name)) {
      std::string valid;
      for (const auto &v : sweep_metric_names())
        valid += (valid.empty() ? "" : ", ") + v;
      throw io::ParseError("unknown metric '" + name + "' (valid: " + valid + ")");
    }
}

SweepSpec parse_sweep_spec(const nlohmann::json &doc) {
  if (!doc.is_object() || !doc.contains("version") ||
      doc["version"].get<int>() != io::kSchemaVersion)
    throw io::ParseError("missing or unsupported schema version (expected 1)");
  if (doc.contains("kind") && doc["kind"].get<std::string>() != "sweep")
    throw io::ParseError("document kind is not 'sweep'");
  SweepSpec spec;
  spec.variable = doc.at("variable").get<std::string>();
  if (doc.contains("values")) {
    for (const auto &v : doc["values"])
      spec.values.push_back(v.get<double>());
  } else if (doc.contains("range")) {
    const auto &r = doc["range"];
    const double from = r.at("from").get<double>();
    const double to = r.at("to").get<double>();
    const double step = r.contains("step") ? r["step"].get<double>() : 1.0;
    if (!(step > 0.0))
      throw io::ParseError("range step must be > 0");
    for (double v = from; v <= to + 1e-12 * std::abs(step); v += step)
      spec.values.push_back(v);
  } else {
    throw io::ParseError("sweep needs 'values' or 'range'");
  }
  if (doc.contains("fixed"))
    for (const auto &[key, val] : doc["fixed"].items())
      spec.fixed[key] = val.get<double>();
  for (const auto &o : doc.at("outputs"))
    spec.outputs.push_back(o.get<std::string>());
  if (doc.contains("family")) {
    spec.family_name = doc["family"].at("name").get<std::string>();
    for (const auto &v : doc["family"].at("values"))
      spec.family_values.push_back(v.get<double>());
  }
  spec.validate();
  return spec;
}

std::string run_sweep(const SweepSpec &spec) {
  spec.validate();
  std::ostringstream out;
  if (!spec.family_name.empty())
    out << spec.family_name << ",";
  out << spec.variable;
  for (const auto &name : spec.outputs)
    out << "," << name;
  out << "\n";

  std::vector<double> family =
      spec.family_values.empty() ? std::vector<double>{0.0} : spec.family_values;
  for (double fam : family) {
    for (double v : spec.values) {
      Params p = spec.fixed;
      p[spec.variable] = v;
      if (!spec.family_name.empty())
        p[spec.family_name] = fam;
      if (!spec.family_name.empty())
        out << io::format_double(fam) << ",";
      out << io::format_double(v);
      for (const auto &name : spec.outputs)
        out << "," << io::format_double(metrics().at(name)(p));
      out << "\n";
    }
  }
  return out.str();
}

} // namespace retainer
