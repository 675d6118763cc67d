#include "gossip/graph.hpp"

#include <algorithm>
#include <string>

namespace gossip {

ConnectivityGraph::ConnectivityGraph(int agents)
    : agents_(agents), adjacency_(static_cast<std::size_t>(agents) * agents, 0) {
  if (agents < 1) throw ValidationError("graph needs at least one agent");
}

ConnectivityGraph ConnectivityGraph::complete(int agents) {
  ConnectivityGraph graph(agents);
  for (int i = 1; i <= agents; ++i) {
    for (int j = 1; j <= agents; ++j) {
      if (i != j) graph.add_edge(AgentId{i}, AgentId{j});
    }
  }
  return graph;
}

void ConnectivityGraph::add_edge(AgentId from, AgentId to) {
  if (from.value() < 1 || from.value() > agents_ || to.value() < 1 || to.value() > agents_) {
    throw ValidationError("edge " + std::to_string(from.value()) + "->" +
                          std::to_string(to.value()) + " names an unknown agent");
  }
  if (from == to) throw ValidationError("self-loop on agent " + std::to_string(from.value()));
  adjacency_[static_cast<std::size_t>(from.value() - 1) * agents_ + (to.value() - 1)] = 1;
}

bool ConnectivityGraph::connected(AgentId from, AgentId to) const {
  if (from.value() < 1 || from.value() > agents_ || to.value() < 1 || to.value() > agents_) {
    return false;
  }
  return adjacency_[static_cast<std::size_t>(from.value() - 1) * agents_ + (to.value() - 1)] != 0;
}

bool ConnectivityGraph::empty() const {
  return std::none_of(adjacency_.begin(), adjacency_.end(), [](char c) { return c != 0; });
}

bool ConnectivityGraph::is_complete() const {
  for (int i = 1; i <= agents_; ++i) {
    for (int j = 1; j <= agents_; ++j) {
      if (i != j && !connected(AgentId{i}, AgentId{j})) return false;
    }
  }
  return true;
}

bool ConnectivityGraph::is_symmetric() const {
  for (int i = 1; i <= agents_; ++i) {
    for (int j = i + 1; j <= agents_; ++j) {
      if (connected(AgentId{i}, AgentId{j}) != connected(AgentId{j}, AgentId{i})) return false;
    }
  }
  return true;
}

std::vector<std::pair<AgentId, AgentId>> ConnectivityGraph::edges() const {
  std::vector<std::pair<AgentId, AgentId>> out;
  for (int i = 1; i <= agents_; ++i) {
    for (int j = 1; j <= agents_; ++j) {
      if (connected(AgentId{i}, AgentId{j})) out.emplace_back(AgentId{i}, AgentId{j});
    }
  }
  return out;
}

}  // namespace gossip
