#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/types.hpp"

namespace gossip {

/// A knows-whether term: either a bare secret (depth 0) or
/// kw(i1, kw(i2, ... kw(ik, secret))) with depth k.
///
/// The agent chain is stored outermost first, so kw(3,kw(1,2)) has
/// chain {3, 1} and base secret 2.
class InfoAtom {
 public:
  static InfoAtom secret(SecretId secret);
  static InfoAtom knows_whether(AgentId agent, const InfoAtom& inner);

  int depth() const { return static_cast<int>(chain_.size()); }
  SecretId base_secret() const { return secret_; }
  const std::vector<AgentId>& agent_chain() const { return chain_; }

  /// Outermost knower, absent for a bare secret.
  std::optional<AgentId> outer_agent() const;

  /// The term with the outermost kw stripped. Requires depth() > 0.
  InfoAtom inner() const;

  /// Canonical order: depth, then agent chain outermost to innermost,
  /// then secret id.
  friend std::strong_ordering operator<=>(const InfoAtom& a, const InfoAtom& b);
  friend bool operator==(const InfoAtom& a, const InfoAtom& b) = default;

 private:
  std::vector<AgentId> chain_;
  SecretId secret_{1};
};

inline int depth(const InfoAtom& atom) { return atom.depth(); }

/// Ids in range, depth within the bound, and no agent directly nested in
/// itself (kw(i,kw(i,...)) is excluded).
bool is_well_formed(const InfoAtom& atom, int agents, int secrets, int max_depth);

/// Renders the secret id for depth 0 and kw(I,...) otherwise.
std::string to_string(const InfoAtom& atom);

/// Inverse of to_string; whitespace is ignored. Throws ParseError.
InfoAtom parse_atom(std::string_view text);

}  // namespace gossip
