#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace retainer {

// A task type has no worker group able to serve it.
class InfeasibleRoutingError : public std::runtime_error {
public:
  InfeasibleRoutingError(std::string task_id, const std::string &what)
      : std::runtime_error(what), task_id_(std::move(task_id)) {}
  const std::string &task_id() const { return task_id_; }

private:
  std::string task_id_;
};

struct TaskType {
  std::string id;
  double lambda = 0.0; // tasks/second
};

struct WorkerGroup {
  std::string id;
  double mu = 0.0; // workers/second
  std::vector<std::string> capabilities;
};

struct RoutingInstance {
  std::vector<TaskType> tasks;
  std::vector<WorkerGroup> groups;
  std::optional<int> subscription_cap;

  // Checks rates, capability references, coverage and the subscription cap.
  void validate() const;
};

struct RoutingPlan {
  // (group id, task id) -> assignment rate a_ij; only capable pairs appear.
  std::map<std::pair<std::string, std::string>, double> assignments;
  std::map<std::string, double> per_task_rho;
  double worst_rho = 0.0;

  double assigned_rate(const std::string &group, const std::string &task) const;
};

// Minimizes the worst-case traffic intensity max_j lambda_j / sum_i a_ij by
// bisection on rho with a max-flow feasibility test at each probe.
RoutingPlan min_max_intensity(const RoutingInstance &instance);

// A plan with every per-task intensity <= rho, or nullopt if none exists.
std::optional<RoutingPlan> feasible_assignment(const RoutingInstance &instance,
                                               double rho);

// Uniform split baseline: a_ij = mu_i / |capabilities(i)|.
RoutingPlan random_assignment(const RoutingInstance &instance);

} // namespace retainer
