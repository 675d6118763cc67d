#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gossip/atom.hpp"

namespace gossip {

inline constexpr std::size_t kNoAtom = static_cast<std::size_t>(-1);

/// Every well-formed atom for (n agents, s secrets, depth bound d), in
/// canonical order and interned by position.
class InfoUniverse {
 public:
  /// Throws ValidationError unless agents >= 1, secrets >= 1, max_depth >= 0.
  InfoUniverse(int agents, int secrets, int max_depth);

  int agent_count() const { return agents_; }
  int secret_count() const { return secrets_; }
  int max_depth() const { return max_depth_; }

  std::size_t size() const { return atoms_.size(); }
  std::span<const InfoAtom> atoms() const { return atoms_; }
  const InfoAtom& atom(std::size_t index) const { return atoms_.at(index); }

  std::optional<std::size_t> index_of(const InfoAtom& atom) const;
  /// Like index_of but throws ValidationError naming the atom.
  std::size_t require_index(const InfoAtom& atom) const;

  std::size_t secret_index(SecretId secret) const {
    return static_cast<std::size_t>(secret.value() - 1);
  }

  int depth_of(std::size_t index) const { return depths_[index]; }
  /// 0 for bare secrets.
  int outer_agent_of(std::size_t index) const { return outer_[index]; }

  /// Index of kw(agent, atom(index)), or kNoAtom when that term is not in
  /// the universe (depth bound reached, or the atom already starts with
  /// kw(agent, ...)).
  std::size_t wrap(AgentId agent, std::size_t index) const {
    return wrap_[index * static_cast<std::size_t>(agents_) +
                 static_cast<std::size_t>(agent.value() - 1)];
  }

  /// Index of the atom with its outermost kw stripped; kNoAtom at depth 0.
  std::size_t unwrap(std::size_t index) const { return unwrap_[index]; }

  /// Number of atoms with depth <= bound.
  std::size_t count_up_to_depth(int bound) const;

 private:
  int agents_;
  int secrets_;
  int max_depth_;
  std::vector<InfoAtom> atoms_;
  std::vector<int> depths_;
  std::vector<int> outer_;
  std::vector<std::size_t> wrap_;
  std::vector<std::size_t> unwrap_;
  std::map<InfoAtom, std::size_t> index_;
};

/// Materializes the universe; rejects a negative depth bound.
InfoUniverse enumerate_atoms(int agents, int secrets, int max_depth);

/// Size of the well-formed universe:
/// s + n*s*sum_{j<d} (n-1)^j for d >= 1.
std::int64_t count_atoms(int agents, int secrets, int max_depth);

/// The counting recursion used by the encoding's infoNoAux rules, which
/// multiplies by n at every depth (it counts introspective nesting too):
/// N(0) = s, N(D+1) = n*N(D), total(D+1) = n*N(D) + total(D).
std::int64_t count_atoms_recursive(int agents, int secrets, int max_depth);

}  // namespace gossip
