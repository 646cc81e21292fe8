#pragma once

#include <stdexcept>
#include <string>

namespace retainer {

// Parameters describing one retainer system. All rates are per second;
// unit conversion (per-minute / per-hour wages) happens at the CLI boundary.
struct RetainerParams {
  double lambda = 0.0;    // task arrival rate (tasks/s)
  double mu = 1.0;        // per-request worker recruitment rate (workers/s)
  long long c = 0;        // retainer pool size
  double wage = 0.0;      // retainer wage rate s (currency/worker/s)
  double task_cost = 0.0; // loss per missed task C_task (currency/task)
  double abandon = 0.0;   // abandonment fraction a, in [0,1]
  double alpha = 3.0;     // re-alert timeout multiplier
  double r_mean = 1.36;   // mean worker alert-response time (s)

  double rho() const { return lambda / mu; }

  bool operator==(const RetainerParams &) const = default;

  void validate() const {
    if (!(lambda >= 0.0))
      throw std::domain_error("lambda must be >= 0");
    if (!(mu > 0.0))
      throw std::domain_error("mu must be > 0");
    if (c < 0)
      throw std::domain_error("pool size c must be >= 0");
    if (!(wage >= 0.0))
      throw std::domain_error("wage must be >= 0");
    if (!(task_cost >= 0.0))
      throw std::domain_error("task_cost must be >= 0");
    if (!(abandon >= 0.0 && abandon <= 1.0))
      throw std::domain_error("abandonment fraction must be in [0,1]");
    if (!(alpha > 0.0))
      throw std::domain_error("alpha must be > 0");
    if (!(r_mean > 0.0))
      throw std::domain_error("r_mean must be > 0");
  }
};

} // namespace retainer
