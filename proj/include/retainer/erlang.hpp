#pragma once

#include <vector>

#include "retainer/params.hpp"

namespace retainer {

// Steady-state analytic outputs for one (params, c) pair.
struct PoolMetrics {
  double loss_prob = 0.0;         // pi(c), probability of an empty pool
  std::vector<double> busy_dist;  // pi(0..c), sums to 1
  double expected_busy = 0.0;     // rho * (1 - pi(c))
  double expected_idle = 0.0;     // c - expected_busy
  double expected_wait = 0.0;     // pi(c) / mu, seconds
  double retainer_cost_rate = 0.0; // wage * expected_idle, currency/s
  double total_cost = 0.0;        // task_cost * pi(c) + wage * idle
};

// Probability that all c pool slots are busy (pool empty), computed by the
// forward recurrence B(0)=1, B(j) = rho*B(j-1) / (j + rho*B(j-1)). Stable for
// any c; never forms a factorial. rho = 0, c = 0 defines pi = 1.
double erlang_loss(double rho, long long c);

// pi(0..c): probability of exactly i busy slots. Length c+1, sums to 1.
std::vector<double> busy_distribution(double rho, long long c);

// Expected number of busy slots, rho * (1 - pi(c)).
double expected_busy(double rho, long long c);

// Expected task wait: pi(lambda/mu, c) / mu.
double expected_wait(double lambda, double mu, long long c);

// Wage paid per unit time for idle retainer workers: s * (c - rho*(1-pi(c))).
double retainer_cost_rate(double wage, double rho, long long c);

enum class CostConvention {
  PerTask,  // C_task * pi(c) + s * idle, mixed units as written
  PerTime,  // lambda * C_task * pi(c) + s * idle, currency/s throughout
};

// Total expected cost of running a pool of size c.
double total_cost(const RetainerParams &params, long long c,
                  CostConvention convention = CostConvention::PerTask);

// Stirling-based closed form e^{-rho} * sqrt(2*pi*c) * (e*rho/c)^c, evaluated
// in log space. An estimate, not a probability: can exceed 1 near c = rho.
double approx_loss(double rho, long long c);

struct CombinedPoolLoss {
  double exact = 0.0;  // erlang_loss(k*rho, k*c)
  double approx = 0.0; // sqrt(2*pi*k*c) * (e^{-rho} (e*rho/c)^c)^k
};

// Empty-pool probability for k identical pools merged into one of size k*c.
CombinedPoolLoss combined_pool_loss(double rho, long long c, long long k);

struct ChernoffEstimate {
  double exact = 0.0;      // (e^eps / (1+eps)^{1+eps})^rho
  double simplified = 0.0; // e^{-eps^2 * rho / 3}
};

// Tail estimates of the empty-pool probability at pool size (1+eps)*rho.
ChernoffEstimate chernoff_loss_estimate(double epsilon, double rho);

// Conservative bound min(1, a + pi(c)) accounting for workers who never
// respond to the alert.
double abandonment_adjusted_loss(double a, double rho, long long c);

// Bundle of every closed-form quantity for one configuration.
PoolMetrics pool_metrics(const RetainerParams &params, long long c,
                         CostConvention convention = CostConvention::PerTask);

} // namespace retainer
