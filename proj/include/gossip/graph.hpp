#pragma once

#include <utility>
#include <vector>

#include "gossip/types.hpp"

namespace gossip {

/// Directed "can pass information to" relation over agents 1..n.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  /// No edges.
  explicit ConnectivityGraph(int agents);
  static ConnectivityGraph complete(int agents);

  int agent_count() const { return agents_; }

  /// Throws ValidationError on self-loops or out-of-range agents.
  void add_edge(AgentId from, AgentId to);
  bool connected(AgentId from, AgentId to) const;

  bool empty() const;
  bool is_complete() const;
  bool is_symmetric() const;
  std::vector<std::pair<AgentId, AgentId>> edges() const;

  friend bool operator==(const ConnectivityGraph&, const ConnectivityGraph&) = default;

 private:
  int agents_ = 0;
  std::vector<char> adjacency_;
};

}  // namespace gossip
