#include "gossip/universe.hpp"

#include <algorithm>
#include <string>

namespace gossip {

namespace {

// Agent chains of a given length with no two adjacent entries equal, in
// lexicographic order.
void chains_of_length(int agents, int length, std::vector<AgentId>& current,
                      std::vector<std::vector<AgentId>>& out) {
  if (static_cast<int>(current.size()) == length) {
    out.push_back(current);
    return;
  }
  for (int a = 1; a <= agents; ++a) {
    if (!current.empty() && current.back().value() == a) continue;
    current.push_back(AgentId{a});
    chains_of_length(agents, length, current, out);
    current.pop_back();
  }
}

InfoAtom build(const std::vector<AgentId>& chain, SecretId secret) {
  InfoAtom atom = InfoAtom::secret(secret);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    atom = InfoAtom::knows_whether(*it, atom);
  }
  return atom;
}

}  // namespace

InfoUniverse::InfoUniverse(int agents, int secrets, int max_depth)
    : agents_(agents), secrets_(secrets), max_depth_(max_depth) {
  if (agents < 1) throw ValidationError("agent count must be >= 1");
  if (secrets < 1) throw ValidationError("secret count must be >= 1");
  if (max_depth < 0) throw ValidationError("depth bound must be >= 0");

  for (int depth = 0; depth <= max_depth; ++depth) {
    std::vector<std::vector<AgentId>> chains;
    std::vector<AgentId> current;
    chains_of_length(agents, depth, current, chains);
    for (const auto& chain : chains) {
      for (int k = 1; k <= secrets; ++k) atoms_.push_back(build(chain, SecretId{k}));
    }
  }

  const std::size_t count = atoms_.size();
  depths_.resize(count);
  outer_.resize(count);
  unwrap_.assign(count, kNoAtom);
  wrap_.assign(count * static_cast<std::size_t>(agents), kNoAtom);
  for (std::size_t i = 0; i < count; ++i) {
    index_.emplace(atoms_[i], i);
    depths_[i] = atoms_[i].depth();
    outer_[i] = atoms_[i].depth() == 0 ? 0 : atoms_[i].agent_chain().front().value();
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (depths_[i] > 0) unwrap_[i] = index_.at(atoms_[i].inner());
    if (depths_[i] == max_depth) continue;
    for (int a = 1; a <= agents; ++a) {
      if (outer_[i] == a) continue;
      wrap_[i * static_cast<std::size_t>(agents) + static_cast<std::size_t>(a - 1)] =
          index_.at(InfoAtom::knows_whether(AgentId{a}, atoms_[i]));
    }
  }
}

std::optional<std::size_t> InfoUniverse::index_of(const InfoAtom& atom) const {
  auto it = index_.find(atom);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t InfoUniverse::require_index(const InfoAtom& atom) const {
  if (auto index = index_of(atom)) return *index;
  throw ValidationError("atom " + to_string(atom) + " is not well-formed for n=" +
                        std::to_string(agents_) + " s=" + std::to_string(secrets_) +
                        " d=" + std::to_string(max_depth_));
}

std::size_t InfoUniverse::count_up_to_depth(int bound) const {
  return static_cast<std::size_t>(
      std::count_if(depths_.begin(), depths_.end(), [bound](int d) { return d <= bound; }));
}

InfoUniverse enumerate_atoms(int agents, int secrets, int max_depth) {
  return InfoUniverse(agents, secrets, max_depth);
}

std::int64_t count_atoms(int agents, int secrets, int max_depth) {
  std::int64_t total = secrets;
  std::int64_t layer = static_cast<std::int64_t>(agents) * secrets;
  for (int depth = 1; depth <= max_depth; ++depth) {
    total += layer;
    layer *= agents - 1;
  }
  return total;
}

std::int64_t count_atoms_recursive(int agents, int secrets, int max_depth) {
  std::int64_t layer = secrets;
  std::int64_t total = secrets;
  for (int depth = 0; depth < max_depth; ++depth) {
    layer *= agents;
    total += layer;
  }
  return total;
}

}  // namespace gossip
