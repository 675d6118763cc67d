#include "gossip/knowledge.hpp"

#include <bit>
#include <string>

namespace gossip {

KnowledgeState::KnowledgeState(int agents, std::size_t atoms)
    : agents_(agents), atoms_(atoms), words_((atoms + 63) / 64) {
  if (agents < 1) throw ValidationError("knowledge state needs at least one agent");
  bits_.assign(words_ * static_cast<std::size_t>(agents), 0);
}

void KnowledgeState::check(AgentId agent) const {
  if (agent.value() < 1 || agent.value() > agents_) {
    throw ValidationError("unknown agent " + std::to_string(agent.value()));
  }
}

bool KnowledgeState::knows(AgentId agent, std::size_t atom) const {
  check(agent);
  if (atom >= atoms_) return false;
  return (row(agent)[atom / 64] >> (atom % 64)) & 1U;
}

bool KnowledgeState::learn(AgentId agent, std::size_t atom) {
  check(agent);
  if (atom >= atoms_) throw ValidationError("unknown atom index " + std::to_string(atom));
  std::uint64_t& word = row(agent)[atom / 64];
  const std::uint64_t mask = std::uint64_t{1} << (atom % 64);
  const bool fresh = (word & mask) == 0;
  word |= mask;
  return fresh;
}

std::size_t KnowledgeState::known_count(AgentId agent) const {
  std::size_t total = 0;
  for (std::uint64_t word : row(agent)) total += static_cast<std::size_t>(std::popcount(word));
  return total;
}

std::size_t KnowledgeState::total_count() const {
  std::size_t total = 0;
  for (std::uint64_t word : bits_) total += static_cast<std::size_t>(std::popcount(word));
  return total;
}

std::vector<std::size_t> KnowledgeState::known_atoms(AgentId agent) const {
  std::vector<std::size_t> out;
  auto bits = row(agent);
  for (std::size_t w = 0; w < bits.size(); ++w) {
    for (std::uint64_t word = bits[w]; word != 0; word &= word - 1) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
    }
  }
  return out;
}

std::span<const std::uint64_t> KnowledgeState::row(AgentId agent) const {
  check(agent);
  return {bits_.data() + static_cast<std::size_t>(agent.value() - 1) * words_, words_};
}

std::span<std::uint64_t> KnowledgeState::row(AgentId agent) {
  check(agent);
  return {bits_.data() + static_cast<std::size_t>(agent.value() - 1) * words_, words_};
}

bool KnowledgeState::agent_subset_of(AgentId agent, const KnowledgeState& other) const {
  auto mine = row(agent);
  auto theirs = other.row(agent);
  for (std::size_t w = 0; w < words_; ++w) {
    if ((mine[w] & ~theirs[w]) != 0) return false;
  }
  return true;
}

bool KnowledgeState::subset_of(const KnowledgeState& other) const {
  if (agents_ != other.agents_ || atoms_ != other.atoms_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if ((bits_[i] & ~other.bits_[i]) != 0) return false;
  }
  return true;
}

std::size_t KnowledgeState::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(agents_);
  for (std::uint64_t word : bits_) {
    h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace gossip
