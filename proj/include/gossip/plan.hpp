#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/atom.hpp"

namespace gossip {

/// One directed call. The share lists are only used under a bounded share
/// policy: caller_shares is what the caller passes to the callee and
/// callee_shares what flows back.
struct Call {
  AgentId caller;
  AgentId callee;
  int time = 0;
  std::optional<std::vector<InfoAtom>> caller_shares;
  std::optional<std::vector<InfoAtom>> callee_shares;

  /// Shares sent by `sender`, which must be one of the two parties.
  const std::optional<std::vector<InfoAtom>>& shares_from(AgentId sender) const {
    return sender == caller ? caller_shares : callee_shares;
  }

  friend bool operator==(const Call&, const Call&) = default;
  /// Orders by (time, caller, callee) only.
  friend std::strong_ordering operator<=>(const Call& a, const Call& b) {
    if (auto c = a.time <=> b.time; c != 0) return c;
    if (auto c = a.caller <=> b.caller; c != 0) return c;
    return a.callee <=> b.callee;
  }
};

inline Call make_call(int caller, int callee, int time) {
  return Call{AgentId{caller}, AgentId{callee}, time, std::nullopt, std::nullopt};
}

struct Round {
  int step = 0;
  std::vector<Call> calls;

  friend bool operator==(const Round&, const Round&) = default;
};

/// Rounds with strictly increasing steps; steps without a round are idle.
class Plan {
 public:
  Plan() = default;
  /// Groups calls by time and sorts each round by (caller, callee).
  static Plan from_calls(std::vector<Call> calls);

  const std::vector<Round>& rounds() const { return rounds_; }
  bool empty() const { return rounds_.empty(); }
  std::size_t call_count() const;
  /// One past the last step that has a round; 0 for an empty plan.
  int horizon() const;
  const Round* round_at(int step) const;
  std::vector<Call> calls() const;

  friend bool operator==(const Plan&, const Plan&) = default;

 private:
  std::vector<Round> rounds_;
};

/// `call(I,J,T)` followed by `share I->J: {atoms}` clauses when present.
std::string render_call(const Call& call);
/// One call per line.
std::string render_plan(const Plan& plan);
/// Accepts one or more calls per line; `#` and `%` start comments.
/// Throws ParseError naming the offending token.
Plan parse_plan(std::string_view text);

}  // namespace gossip
