#include "retainer/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace retainer {

FlowNetwork::FlowNetwork(int node_count) {
  if (node_count <= 0)
    throw std::invalid_argument("flow network needs at least one node");
  adj_.resize(static_cast<size_t>(node_count));
  level_.resize(static_cast<size_t>(node_count));
  next_.resize(static_cast<size_t>(node_count));
}

int FlowNetwork::add_edge(int from, int to, double capacity) {
  if (from < 0 || to < 0 || from >= node_count() || to >= node_count())
    throw std::invalid_argument("edge endpoint out of range");
  if (!(capacity >= 0.0))
    throw std::invalid_argument("edge capacity must be >= 0");
  auto &fa = adj_[static_cast<size_t>(from)];
  auto &ta = adj_[static_cast<size_t>(to)];
  fa.push_back({to, static_cast<int>(ta.size()), capacity, 0.0});
  ta.push_back({from, static_cast<int>(fa.size()) - 1, 0.0, 0.0});
  handles_.emplace_back(from, static_cast<int>(fa.size()) - 1);
  return static_cast<int>(handles_.size()) - 1;
}

bool FlowNetwork::build_levels(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> bfs;
  level_[static_cast<size_t>(source)] = 0;
  bfs.push(source);
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (const Edge &e : adj_[static_cast<size_t>(v)]) {
      if (e.cap - e.flow > kEps && level_[static_cast<size_t>(e.to)] < 0) {
        level_[static_cast<size_t>(e.to)] = level_[static_cast<size_t>(v)] + 1;
        bfs.push(e.to);
      }
    }
  }
  return level_[static_cast<size_t>(sink)] >= 0;
}

double FlowNetwork::push(int v, int sink, double limit) {
  if (v == sink)
    return limit;
  for (size_t &i = next_[static_cast<size_t>(v)];
       i < adj_[static_cast<size_t>(v)].size(); ++i) {
    Edge &e = adj_[static_cast<size_t>(v)][i];
    const double residual = e.cap - e.flow;
    if (residual > kEps &&
        level_[static_cast<size_t>(e.to)] == level_[static_cast<size_t>(v)] + 1) {
      const double pushed = push(e.to, sink, std::min(limit, residual));
      if (pushed > kEps) {
        e.flow += pushed;
        adj_[static_cast<size_t>(e.to)][static_cast<size_t>(e.rev)].flow -= pushed;
        return pushed;
      }
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(int source, int sink) {
  if (source < 0 || sink < 0 || source >= node_count() || sink >= node_count())
    throw std::invalid_argument("source/sink out of range");
  if (source == sink)
    throw std::invalid_argument("source and sink must differ");
  for (auto &edges : adj_)
    for (Edge &e : edges)
      e.flow = 0.0;
  double total = 0.0;
  while (build_levels(source, sink)) {
    std::fill(next_.begin(), next_.end(), 0);
    while (true) {
      const double pushed =
          push(source, sink, std::numeric_limits<double>::infinity());
      if (pushed <= kEps)
        break;
      total += pushed;
    }
  }
  return total;
}

double FlowNetwork::flow_on(int edge_handle) const {
  if (edge_handle < 0 || edge_handle >= static_cast<int>(handles_.size()))
    throw std::invalid_argument("unknown edge handle");
  const auto &[node, idx] = handles_[static_cast<size_t>(edge_handle)];
  return adj_[static_cast<size_t>(node)][static_cast<size_t>(idx)].flow;
}

} // namespace retainer
