#include "retainer/routing.hpp"

#include <algorithm>
#include <cmath>

#include "retainer/maxflow.hpp"

namespace retainer {

namespace {

constexpr double kSaturationTol = 1e-9;

struct Indexed {
  std::map<std::string, int> task_index;
  std::map<std::string, int> group_index;
  std::vector<std::vector<int>> capable_tasks; // per group, task indices
  double total_mu = 0.0;
};

Indexed index_instance(const RoutingInstance &inst) {
  Indexed ix;
  for (size_t j = 0; j < inst.tasks.size(); ++j)
    ix.task_index[inst.tasks[j].id] = static_cast<int>(j);
  ix.capable_tasks.resize(inst.groups.size());
  for (size_t i = 0; i < inst.groups.size(); ++i) {
    ix.group_index[inst.groups[i].id] = static_cast<int>(i);
    for (const auto &cap : inst.groups[i].capabilities)
      ix.capable_tasks[i].push_back(ix.task_index.at(cap));
    ix.total_mu += inst.groups[i].mu;
  }
  return ix;
}

// Max-flow feasibility probe at intensity rho. Returns a plan when every
// task can receive worker rate lambda_j / rho.
std::optional<RoutingPlan> solve_at(const RoutingInstance &inst,
                                    const Indexed &ix, double rho) {
  const int m = static_cast<int>(inst.groups.size());
  const int n = static_cast<int>(inst.tasks.size());
  const int source = 0;
  const int sink = m + n + 1;
  FlowNetwork net(m + n + 2);

  for (int i = 0; i < m; ++i)
    net.add_edge(source, 1 + i, inst.groups[static_cast<size_t>(i)].mu);

  std::vector<std::vector<int>> assign_edges(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j : ix.capable_tasks[static_cast<size_t>(i)])
      assign_edges[static_cast<size_t>(i)].push_back(
          net.add_edge(1 + i, 1 + m + j, ix.total_mu)); // finite "infinity"

  std::vector<int> sink_edges;
  std::vector<double> demands;
  for (int j = 0; j < n; ++j) {
    const double d = inst.tasks[static_cast<size_t>(j)].lambda / rho;
    sink_edges.push_back(net.add_edge(1 + m + j, sink, d));
    demands.push_back(d);
  }

  net.max_flow(source, sink);
  // every task individually must receive its demanded rate; an aggregate
  // check would let the whole tolerance land on one small task
  for (int j = 0; j < n; ++j)
    if (net.flow_on(sink_edges[static_cast<size_t>(j)]) <
        demands[static_cast<size_t>(j)] * (1.0 - kSaturationTol) - 1e-15)
      return std::nullopt;

  RoutingPlan plan;
  std::vector<double> inflow(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    const auto &tasks = ix.capable_tasks[static_cast<size_t>(i)];
    for (size_t e = 0; e < tasks.size(); ++e) {
      const double a =
          std::max(0.0, net.flow_on(assign_edges[static_cast<size_t>(i)][e]));
      plan.assignments[{inst.groups[static_cast<size_t>(i)].id,
                        inst.tasks[static_cast<size_t>(tasks[e])].id}] = a;
      inflow[static_cast<size_t>(tasks[e])] += a;
    }
  }
  plan.worst_rho = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto &task = inst.tasks[static_cast<size_t>(j)];
    const double rho_j = task.lambda / inflow[static_cast<size_t>(j)];
    plan.per_task_rho[task.id] = rho_j;
    plan.worst_rho = std::max(plan.worst_rho, rho_j);
  }
  return plan;
}

} // namespace

void RoutingInstance::validate() const {
  if (tasks.empty())
    throw std::invalid_argument("instance has no task types");
  std::set<std::string> task_ids;
  for (const auto &t : tasks) {
    if (!(t.lambda > 0.0))
      throw std::invalid_argument("task " + t.id + " needs lambda > 0");
    if (!task_ids.insert(t.id).second)
      throw std::invalid_argument("duplicate task id " + t.id);
  }
  std::set<std::string> covered;
  std::set<std::string> group_ids;
  for (const auto &g : groups) {
    if (!(g.mu > 0.0))
      throw std::invalid_argument("group " + g.id + " needs mu > 0");
    if (!group_ids.insert(g.id).second)
      throw std::invalid_argument("duplicate group id " + g.id);
    if (g.capabilities.empty())
      throw std::invalid_argument("group " + g.id + " has no capabilities");
    if (subscription_cap &&
        static_cast<int>(g.capabilities.size()) > *subscription_cap)
      throw std::invalid_argument("group " + g.id +
                                  " exceeds the subscription cap");
    std::set<std::string> seen;
    for (const auto &cap : g.capabilities) {
      if (!task_ids.count(cap))
        throw std::invalid_argument("group " + g.id +
                                    " references unknown task " + cap);
      if (!seen.insert(cap).second)
        throw std::invalid_argument("group " + g.id +
                                    " repeats capability " + cap);
      covered.insert(cap);
    }
  }
  for (const auto &t : tasks)
    if (!covered.count(t.id))
      throw InfeasibleRoutingError(
          t.id, "task " + t.id + " has no capable worker group");
}

double RoutingPlan::assigned_rate(const std::string &group,
                                  const std::string &task) const {
  auto it = assignments.find({group, task});
  return it == assignments.end() ? 0.0 : it->second;
}

RoutingPlan min_max_intensity(const RoutingInstance &instance) {
  instance.validate();
  const Indexed ix = index_instance(instance);

  // Lower bound: each task is limited by the total rate of groups that can
  // serve it at all.
  double lo = 0.0;
  for (size_t j = 0; j < instance.tasks.size(); ++j) {
    double reachable = 0.0;
    for (size_t i = 0; i < instance.groups.size(); ++i)
      for (int t : ix.capable_tasks[i])
        if (t == static_cast<int>(j))
          reachable += instance.groups[i].mu;
    lo = std::max(lo, instance.tasks[j].lambda / reachable);
  }

  double hi = random_assignment(instance).worst_rho;
  if (hi > lo) {
    for (int iter = 0; iter < 100 && hi - lo > 1e-13 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (solve_at(instance, ix, mid))
        hi = mid;
      else
        lo = mid;
    }
  }
  auto plan = solve_at(instance, ix, hi);
  // hi was verified feasible during the search (or equals the baseline).
  return *plan;
}

std::optional<RoutingPlan> feasible_assignment(const RoutingInstance &instance,
                                               double rho) {
  if (!(rho > 0.0))
    throw std::domain_error("target intensity rho must be > 0");
  instance.validate();
  return solve_at(instance, index_instance(instance), rho);
}

RoutingPlan random_assignment(const RoutingInstance &instance) {
  instance.validate();
  RoutingPlan plan;
  std::map<std::string, double> inflow;
  for (const auto &g : instance.groups) {
    const double share = g.mu / static_cast<double>(g.capabilities.size());
    for (const auto &cap : g.capabilities) {
      plan.assignments[{g.id, cap}] = share;
      inflow[cap] += share;
    }
  }
  plan.worst_rho = 0.0;
  for (const auto &t : instance.tasks) {
    const double rho_j = t.lambda / inflow[t.id];
    plan.per_task_rho[t.id] = rho_j;
    plan.worst_rho = std::max(plan.worst_rho, rho_j);
  }
  return plan;
}

} // namespace retainer
