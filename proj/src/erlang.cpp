#include "retainer/erlang.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace retainer {

namespace {

void check_domain(double rho, long long c) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::domain_error("traffic intensity rho must be finite and >= 0");
  if (c < 0)
    throw std::domain_error("pool size c must be >= 0");
}

} // namespace

double erlang_loss(double rho, long long c) {
  check_domain(rho, c);
  if (c == 0)
    return 1.0;
  if (rho == 0.0)
    return 0.0;
  double b = 1.0;
  for (long long j = 1; j <= c; ++j)
    b = rho * b / (static_cast<double>(j) + rho * b);
  return b;
}

std::vector<double> busy_distribution(double rho, long long c) {
  check_domain(rho, c);
  std::vector<double> dist(static_cast<size_t>(c) + 1, 0.0);
  if (rho == 0.0) {
    dist[0] = 1.0;
    return dist;
  }
  // log term_i = i*log(rho) - log(i!), shifted by the max before exponentiating
  const double log_rho = std::log(rho);
  std::vector<double> log_terms(dist.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (long long i = 0; i <= c; ++i) {
    double lt = static_cast<double>(i) * log_rho -
                std::lgamma(static_cast<double>(i) + 1.0);
    log_terms[static_cast<size_t>(i)] = lt;
    max_log = std::max(max_log, lt);
  }
  double sum = 0.0;
  for (size_t i = 0; i < dist.size(); ++i) {
    dist[i] = std::exp(log_terms[i] - max_log);
    sum += dist[i];
  }
  for (double &p : dist)
    p /= sum;
  return dist;
}

double expected_busy(double rho, long long c) {
  return rho * (1.0 - erlang_loss(rho, c));
}

double expected_wait(double lambda, double mu, long long c) {
  if (!(mu > 0.0))
    throw std::domain_error("mu must be > 0");
  return erlang_loss(lambda / mu, c) / mu;
}

double retainer_cost_rate(double wage, double rho, long long c) {
  if (!(wage >= 0.0))
    throw std::domain_error("wage must be >= 0");
  return wage * (static_cast<double>(c) - expected_busy(rho, c));
}

double total_cost(const RetainerParams &params, long long c,
                  CostConvention convention) {
  params.validate();
  const double rho = params.rho();
  const double loss = erlang_loss(rho, c);
  const double idle_cost = retainer_cost_rate(params.wage, rho, c);
  const double task_weight =
      convention == CostConvention::PerTime ? params.lambda : 1.0;
  return task_weight * params.task_cost * loss + idle_cost;
}

double approx_loss(double rho, long long c) {
  if (!(rho > 0.0))
    throw std::domain_error("approx_loss requires rho > 0");
  if (c < 1)
    throw std::domain_error("approx_loss requires c >= 1");
  const double cd = static_cast<double>(c);
  const double log_val = -rho + 0.5 * std::log(2.0 * M_PI * cd) +
                         cd * (1.0 + std::log(rho) - std::log(cd));
  return std::exp(log_val);
}

CombinedPoolLoss combined_pool_loss(double rho, long long c, long long k) {
  if (k < 1)
    throw std::domain_error("pool count k must be >= 1");
  if (!(rho > 0.0))
    throw std::domain_error("combined_pool_loss requires rho > 0");
  if (c < 1)
    throw std::domain_error("combined_pool_loss requires c >= 1");
  CombinedPoolLoss out;
  out.exact = erlang_loss(static_cast<double>(k) * rho, k * c);
  const double cd = static_cast<double>(c);
  const double kd = static_cast<double>(k);
  const double per_pool_log = -rho + cd * (1.0 + std::log(rho) - std::log(cd));
  out.approx = std::exp(0.5 * std::log(2.0 * M_PI * kd * cd) + kd * per_pool_log);
  return out;
}

ChernoffEstimate chernoff_loss_estimate(double epsilon, double rho) {
  if (!(epsilon > 0.0))
    throw std::domain_error("epsilon must be > 0");
  if (!(rho > 0.0))
    throw std::domain_error("rho must be > 0");
  ChernoffEstimate out;
  out.exact = std::exp(rho * (epsilon - (1.0 + epsilon) * std::log1p(epsilon)));
  out.simplified = std::exp(-epsilon * epsilon * rho / 3.0);
  return out;
}

double abandonment_adjusted_loss(double a, double rho, long long c) {
  if (!(a >= 0.0 && a <= 1.0))
    throw std::domain_error("abandonment fraction must be in [0,1]");
  return std::min(1.0, a + erlang_loss(rho, c));
}

PoolMetrics pool_metrics(const RetainerParams &params, long long c,
                         CostConvention convention) {
  params.validate();
  PoolMetrics m;
  const double rho = params.rho();
  m.busy_dist = busy_distribution(rho, c);
  m.loss_prob = m.busy_dist.back();
  m.expected_busy = rho * (1.0 - m.loss_prob);
  m.expected_idle = static_cast<double>(c) - m.expected_busy;
  m.expected_wait = m.loss_prob / params.mu;
  m.retainer_cost_rate = params.wage * m.expected_idle;
  const double task_weight =
      convention == CostConvention::PerTime ? params.lambda : 1.0;
  m.total_cost = task_weight * params.task_cost * m.loss_prob +
                 m.retainer_cost_rate;
  return m;
}

} // namespace retainer
