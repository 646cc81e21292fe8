#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace retainer {

// Dinic's algorithm on real-valued capacities. Deterministic: augmenting
// order follows edge insertion order. Saturation tolerance 1e-12.
class FlowNetwork {
public:
  explicit FlowNetwork(int node_count);

  // Returns an edge handle usable with flow_on() after solving.
  int add_edge(int from, int to, double capacity);

  // Computes the maximum flow from source to sink; repeat calls restart
  // from zero flow.
  double max_flow(int source, int sink);

  double flow_on(int edge_handle) const;

  int node_count() const { return static_cast<int>(level_.size()); }

private:
  struct Edge {
    int to;
    int rev; // index of reverse edge in adj_[to]
    double cap;
    double flow;
  };

  bool build_levels(int source, int sink);
  double push(int v, int sink, double limit);

  std::vector<std::vector<Edge>> adj_;
  std::vector<std::pair<int, int>> handles_; // (node, index into adj_[node])
  std::vector<int> level_;
  std::vector<size_t> next_;

  static constexpr double kEps = 1e-12;
};

} // namespace retainer
