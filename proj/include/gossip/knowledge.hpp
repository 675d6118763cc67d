#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gossip/types.hpp"

namespace gossip {

/// Per-agent sets of atom indices into a fixed InfoUniverse, stored as one
/// bit row per agent.
class KnowledgeState {
 public:
  KnowledgeState() = default;
  KnowledgeState(int agents, std::size_t atoms);

  int agent_count() const { return agents_; }
  std::size_t atom_count() const { return atoms_; }
  std::size_t words_per_agent() const { return words_; }

  bool knows(AgentId agent, std::size_t atom) const;
  /// Returns true when the atom was not known before. Throws
  /// ValidationError for an unknown agent or atom index.
  bool learn(AgentId agent, std::size_t atom);

  std::size_t known_count(AgentId agent) const;
  std::size_t total_count() const;
  std::vector<std::size_t> known_atoms(AgentId agent) const;

  std::span<const std::uint64_t> row(AgentId agent) const;
  std::span<std::uint64_t> row(AgentId agent);

  /// Agent-wise inclusion.
  bool subset_of(const KnowledgeState& other) const;
  bool agent_subset_of(AgentId agent, const KnowledgeState& other) const;

  std::size_t hash() const;

  friend bool operator==(const KnowledgeState&, const KnowledgeState&) = default;

 private:
  void check(AgentId agent) const;

  int agents_ = 0;
  std::size_t atoms_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace gossip
