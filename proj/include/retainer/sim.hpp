#pragma once

#include <cstdint>
#include <vector>

#include "retainer/params.hpp"

namespace retainer {

enum class SimMode { Baseline, Abandonment, Tiered, Precruitment };

struct LatencySpec {
  enum class Kind { PointMass, Exponential, Empirical };
  Kind kind = Kind::PointMass;
  double mean = 0.0;           // point-mass value / exponential mean
  std::vector<double> samples; // empirical kind only
  bool explicitly_set = false; // given in the config, not defaulted

  double effective_mean() const;
  void validate() const;

  bool operator==(const LatencySpec &) const = default;
};

struct Horizon {
  enum class Kind { Seconds, Tasks };
  Kind kind = Kind::Seconds;
  double value = 10000.0;

  bool operator==(const Horizon &) const = default;
};

struct SimConfig {
  RetainerParams params;
  Horizon horizon;
  uint64_t seed = 1;
  double warmup = 0.1; // fraction of horizon discarded
  SimMode mode = SimMode::Baseline;
  std::vector<long long> tiers;       // tiered mode pool sizes
  double beta = 0.0;                  // precruitment slack
  LatencySpec response_latency;       // defaults to point-mass r_mean
  double patience = 10.0;             // precruited worker holding time, s
  int max_realerts = 50;
  double respond_fraction = 0.5;      // f: alerts answered within alpha*R
  bool deterministic_recruitment = false; // point-mass 1/mu instead of Exp(mu)

  void validate() const;
  bool operator==(const SimConfig &) const = default;
};

struct Stat {
  double mean = 0.0;
  double se = 0.0;
};

struct TierReport {
  long long arrivals = 0;
  long long served = 0;
  double mean_idle = 0.0;
  double cost_rate = 0.0;
};

struct SimReport {
  long long tasks_arrived = 0;
  long long served = 0;
  long long diverted = 0; // arrivals finding an empty pool
  long long missed = 0;   // re-alert chain exhausted (abandonment/tiered)
  double sim_end_time = 0.0;
  int replications = 1;

  Stat empty_pool_fraction; // diverted / tasks_arrived
  Stat mean_wait;           // seconds
  Stat mean_idle_workers;   // time average over the measured window
  double cost_rate = 0.0;   // wage * mean_idle_workers.mean

  Stat alerts_per_task; // abandonment mode, over served tasks

  // Precruitment mode.
  long long precruited = 0;
  long long dismissed = 0;
  Stat unmatched_fraction;     // tasks arriving with no worker waiting
  Stat wasted_worker_fraction; // dismissed / precruited

  std::vector<TierReport> per_tier;
};

// One event-driven run. Identical (config, seed) gives identical reports.
SimReport simulate(const SimConfig &config);

// n independent runs with counter-derived seeds; across-replication means
// and standard errors.
SimReport replicate(const SimConfig &config, int n);

// Same, with explicit per-replication configs that must all match.
SimReport replicate(const std::vector<SimConfig> &configs);

} // namespace retainer
