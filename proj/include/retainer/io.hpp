#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "retainer/erlang.hpp"
#include "retainer/optimizer.hpp"
#include "retainer/routing.hpp"
#include "retainer/sim.hpp"

namespace retainer::io {

// Malformed or unsupported config document (CLI exit code 2).
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// Document parsers: each expects {"version": 1, "kind": "...", ...}.
RoutingInstance parse_routing_instance(const nlohmann::json &doc);
SimConfig parse_sim_config(const nlohmann::json &doc);

nlohmann::json to_json(const RoutingInstance &instance);
nlohmann::json to_json(const SimConfig &config);
nlohmann::json to_json(const RoutingPlan &plan);
nlohmann::json to_json(const PoolMetrics &metrics);
nlohmann::json to_json(const SizingResult &result);
nlohmann::json to_json(const SimReport &report);
nlohmann::json to_json(const BufferScalingReport &report);

// 12 significant digits, C locale, no trailing junk.
std::string format_double(double v);

} // namespace retainer::io
