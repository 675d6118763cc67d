#pragma once

#include <compare>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "gossip/graph.hpp"
#include "gossip/knowledge.hpp"
#include "gossip/plan.hpp"
#include "gossip/universe.hpp"

namespace gossip {

/// An exception to the share-everything default: `sender` may not pass
/// `atom` to `receiver` at `time`.
struct BlockedShare {
  AgentId sender;
  AgentId receiver;
  InfoAtom atom;
  int time = 0;

  friend auto operator<=>(const BlockedShare&, const BlockedShare&) = default;
  friend bool operator==(const BlockedShare&, const BlockedShare&) = default;
};

/// Every known atom flows across a call unless blocked.
struct ShareAll {
  std::set<BlockedShare> blocked;
};

/// Each call direction carries an explicit set of between min_atoms and
/// max_atoms atoms; both bounds are clamped to what the sender knows.
struct BoundedShare {
  int min_atoms = 0;
  int max_atoms = 0;
};

using SharePolicy = std::variant<ShareAll, BoundedShare>;

enum class ConcurrencyMode { Parallel, Sequential };

/// Knowledge states for times 0..m.
struct Trace {
  std::vector<KnowledgeState> states;

  int length() const { return static_cast<int>(states.size()); }
  const KnowledgeState& at(int time) const { return states.at(static_cast<std::size_t>(time)); }
  const KnowledgeState& final_state() const { return states.back(); }
};

/// The call transition system over one universe, graph and share policy.
/// Holds references: the arguments must outlive this object.
class CallSemantics {
 public:
  CallSemantics(const InfoUniverse& universe, const ConnectivityGraph& graph,
                const SharePolicy& policy, ConcurrencyMode mode);

  const InfoUniverse& universe() const { return universe_; }
  const ConnectivityGraph& graph() const { return graph_; }
  const SharePolicy& policy() const { return policy_; }
  ConcurrencyMode mode() const { return mode_; }

  /// Whether `sender` may pass atom index `atom` to `receiver` at `time`.
  /// `selection` is the call direction's explicit share set; a bounded
  /// policy without one is a ValidationError.
  bool permitted(const KnowledgeState& state, AgentId sender, AgentId receiver, std::size_t atom,
                 int time, const std::optional<std::vector<InfoAtom>>& selection = std::nullopt) const;

  /// Both directions read `state` (the pre-call state). Throws
  /// ValidationError for unknown agents, missing edges or bad share sets.
  KnowledgeState apply_call(const KnowledgeState& state, const Call& call) const;

  /// All calls read the pre-round state. Throws MatchingViolation when an
  /// agent appears twice (parallel) or the round has more than one call
  /// (sequential).
  KnowledgeState apply_round(const KnowledgeState& state, const Round& round) const;

  /// Throws on matching, connectivity or timing problems in `round`.
  void check_round(const Round& round) const;

  /// Trace over times 0..max(horizon, plan.horizon()).
  Trace simulate(const KnowledgeState& initial, const Plan& plan, int horizon) const;

 private:
  void check_call(const Call& call) const;
  void apply_direction(const KnowledgeState& pre, const Call& call, AgentId sender,
                       AgentId receiver, KnowledgeState& out) const;
  std::vector<std::size_t> bounded_selection(const KnowledgeState& pre, const Call& call,
                                             AgentId sender) const;

  const InfoUniverse& universe_;
  const ConnectivityGraph& graph_;
  const SharePolicy& policy_;
  ConcurrencyMode mode_;
};

}  // namespace gossip
