#include "retainer/optimizer.hpp"

#include <cmath>
#include <limits>

namespace retainer {

SizingResult min_pool_for_miss_prob(double rho, double p_max) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::domain_error("rho must be finite and >= 0");
  if (!(p_max > 0.0 && p_max <= 1.0))
    throw std::domain_error("p_max must lie in (0, 1]");

  SizingResult result;
  result.binding = BindingConstraint::MissProbability;
  if (erlang_loss(rho, 0) <= p_max) {
    result.c_star = 0;
    result.achieved_loss = erlang_loss(rho, 0);
    return result;
  }
  // Bracket: pi has its knee near c = rho, so start there and double.
  long long lo = 0; // violates
  long long hi = std::max<long long>(1, static_cast<long long>(std::ceil(rho)));
  while (erlang_loss(rho, hi) > p_max) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (erlang_loss(rho, mid) <= p_max)
      hi = mid;
    else
      lo = mid;
  }
  result.c_star = hi;
  result.achieved_loss = erlang_loss(rho, hi);
  return result;
}

SizingResult min_pool_for_wait(double lambda, double mu, double w_max) {
  if (!(mu > 0.0))
    throw std::domain_error("mu must be > 0");
  if (!(w_max > 0.0))
    throw std::domain_error("w_max must be > 0");
  if (!(lambda >= 0.0))
    throw std::domain_error("lambda must be >= 0");

  SizingResult result;
  result.binding = BindingConstraint::WaitTime;
  if (lambda == 0.0) {
    // No arrivals: no task ever waits, regardless of pool size.
    result.c_star = 0;
    result.achieved_loss = erlang_loss(0.0, 0);
    result.achieved_wait = 0.0;
    return result;
  }
  const double p_max = std::min(1.0, mu * w_max);
  result = min_pool_for_miss_prob(lambda / mu, p_max);
  result.binding = BindingConstraint::WaitTime;
  result.achieved_wait = result.achieved_loss / mu;
  return result;
}

SizingResult optimize_total_cost(const RetainerParams &params,
                                 CostConvention convention) {
  params.validate();
  const double rho = params.rho();

  SizingResult result;
  result.binding = BindingConstraint::Cost;

  if (params.wage == 0.0) {
    if (params.task_cost == 0.0) {
      result.c_star = 0;
      result.achieved_loss = erlang_loss(rho, 0);
      result.objective = 0.0;
      return result;
    }
    // Workers are free: any pool large enough to drive pi below machine
    // epsilon is as good as it gets, but the problem is formally unbounded.
    result = min_pool_for_miss_prob(
        rho, std::numeric_limits<double>::epsilon());
    result.binding = BindingConstraint::Cost;
    result.objective = total_cost(params, result.c_star, convention);
    result.unbounded_warning = true;
    return result;
  }

  double best = std::numeric_limits<double>::infinity();
  long long best_c = 0;
  for (long long c = 0;; ++c) {
    const double cd = static_cast<double>(c);
    // Retainer wage on the guaranteed-idle excess alone already loses.
    if (cd > rho && params.wage * (cd - rho) > best)
      break;
    const double obj = total_cost(params, c, convention);
    if (obj < best) {
      best = obj;
      best_c = c;
    }
  }
  result.c_star = best_c;
  result.achieved_loss = erlang_loss(rho, best_c);
  result.objective = best;
  return result;
}

SizingResult shared_pool_size(double rho, long long k, double p_max) {
  if (k < 1)
    throw std::domain_error("pool count k must be >= 1");
  return min_pool_for_miss_prob(static_cast<double>(k) * rho, p_max);
}

BufferScalingReport buffer_scaling_report(double rho, double p_max,
                                          const std::vector<long long> &k_values) {
  if (!(rho > 0.0))
    throw std::domain_error("rho must be > 0");
  BufferScalingReport report;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (long long k : k_values) {
    if (k < 1)
      throw std::domain_error("every k must be >= 1");
    BufferRow row;
    row.k = k;
    const double krho = static_cast<double>(k) * rho;
    row.pool_size = min_pool_for_miss_prob(krho, p_max).c_star;
    row.epsilon = static_cast<double>(row.pool_size) / krho - 1.0;
    row.buffer_workers = row.epsilon * krho;
    row.epsilon_ge_one = row.epsilon >= 1.0;
    report.rows.push_back(row);
    if (row.epsilon > 0.0 && !row.epsilon_ge_one) {
      const double x = std::log(static_cast<double>(k));
      const double y = std::log(row.epsilon);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  if (n >= 2) {
    const double denom = n * sxx - sx * sx;
    if (denom != 0.0)
      report.loglog_slope = (n * sxy - sx * sy) / denom;
  }
  return report;
}

double precruit_rate(double lambda, double beta) {
  if (!(lambda >= 0.0))
    throw std::domain_error("lambda must be >= 0");
  if (!(beta >= 0.0))
    throw std::domain_error("beta must be >= 0");
  return lambda + beta * std::sqrt(lambda);
}

} // namespace retainer
