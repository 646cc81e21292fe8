#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace retainer {

// Grid description for figure-data CSV generation. One swept variable,
// optionally one family variable producing a curve per value.
struct SweepSpec {
  std::string variable; // c | rho | k | epsilon | beta | C_task
  std::vector<double> values;
  std::map<std::string, double> fixed; // remaining parameters by name
  std::vector<std::string> outputs;    // metric names
  std::string family_name;             // optional second grid dimension
  std::vector<double> family_values;

  void validate() const;
};

SweepSpec parse_sweep_spec(const nlohmann::json &doc);

// Names accepted in SweepSpec::outputs.
const std::vector<std::string> &sweep_metric_names();

// One CSV row per grid point, deterministic ordering, '\n' newlines,
// 12 significant digits.
std::string run_sweep(const SweepSpec &spec);

} // namespace retainer
