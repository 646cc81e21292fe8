#pragma once

#include <optional>
#include <vector>

#include "retainer/erlang.hpp"
#include "retainer/params.hpp"

namespace retainer {

enum class BindingConstraint { MissProbability, WaitTime, Cost };

struct SizingResult {
  long long c_star = 0;
  double achieved_loss = 0.0;
  std::optional<double> achieved_wait; // set when mu is known
  std::optional<double> objective;     // set when cost-minimizing
  BindingConstraint binding = BindingConstraint::MissProbability;
  bool unbounded_warning = false; // wage 0 with positive task cost
};

// Smallest integer c with pi(rho, c) <= p_max. Brackets by doubling from
// ceil(rho), then binary search on the strictly decreasing pi(., c).
SizingResult min_pool_for_miss_prob(double rho, double p_max);

// Smallest c with expected wait pi(c)/mu <= w_max. Equivalent to a miss
// probability cap of mu*w_max. lambda = 0 never waits, so c = 0.
SizingResult min_pool_for_wait(double lambda, double mu, double w_max);

// argmin over integer c >= 0 of total_cost(params, c). Linear scan with the
// dominance stop: once wage*(c - rho) exceeds the incumbent, no larger c wins.
SizingResult optimize_total_cost(const RetainerParams &params,
                                 CostConvention convention = CostConvention::PerTask);

// Size one merged pool serving k streams of intensity rho each.
SizingResult shared_pool_size(double rho, long long k, double p_max);

struct BufferRow {
  long long k = 1;
  long long pool_size = 0;   // minimal pool meeting p_max at intensity k*rho
  double epsilon = 0.0;      // pool_size / (k*rho) - 1
  double buffer_workers = 0; // epsilon * k * rho
  bool epsilon_ge_one = false;
};

struct BufferScalingReport {
  std::vector<BufferRow> rows;
  double loglog_slope = 0.0; // least-squares slope of ln(eps) vs ln(k)
};

// How the relative buffer eps needed for pi <= p_max shrinks as k pools
// merge. Rows with eps >= 1 are flagged and excluded from the slope fit.
BufferScalingReport buffer_scaling_report(double rho, double p_max,
                                          const std::vector<long long> &k_values);

// Precruitment rate lambda + beta*sqrt(lambda), workers/second.
double precruit_rate(double lambda, double beta);

} // namespace retainer
