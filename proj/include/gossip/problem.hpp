#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gossip/cost.hpp"
#include "gossip/semantics.hpp"

namespace gossip {

struct AgentAtom {
  AgentId agent;
  InfoAtom atom;

  friend bool operator==(const AgentAtom&, const AgentAtom&) = default;
};

/// Agent i knows exactly secret i.
struct CanonicalInit {};

/// A constraint description of the initial state. Depth-0 pairs are free
/// choices unless `canonical_base` fixes them; deeper atoms are unknown
/// unless required. The constraints must pin down exactly one state.
struct ConstrainedInit {
  bool canonical_base = false;
  std::vector<AgentAtom> required;
  std::vector<AgentAtom> forbidden;
  /// Per-agent [low, high] on the number of known secrets.
  std::optional<std::pair<int, int>> secret_bounds;
  /// No two agents know the same atom.
  bool unique = false;
};

using InitialSpec = std::variant<CanonicalInit, ConstrainedInit>;

struct GoalLiteral {
  AgentId agent;
  InfoAtom atom;
  bool positive = true;

  friend bool operator==(const GoalLiteral&, const GoalLiteral&) = default;
};

enum class CountTarget { Constant, Recursive, Exact };

/// At least N (agent, atom) pairs hold, summed over all agents.
struct GlobalCount {
  CountTarget target = CountTarget::Recursive;
  std::int64_t constant = 0;
};

/// Every agent knows every atom of depth <= max_depth (defaults to the
/// problem's depth bound).
struct FullDepth {
  std::optional<int> max_depth;
};

/// Conjunction of the present parts. An empty spec is always satisfied.
struct GoalSpec {
  std::vector<GoalLiteral> literals;
  std::optional<GlobalCount> count;
  std::optional<FullDepth> full_depth;
  /// Negative literals must hold on every state of a verified trace, not
  /// only at the goal time.
  bool strict_negative = false;

  bool has_negative() const;
};

enum class Objective { LexMakespanThenCalls, MinCalls, MinMakespan, Satisficing };

/// Weak-constraint weights: each call costs call_weight at call_priority,
/// each step before the goal costs step_weight at step_priority.
struct OptimizationSpec {
  Objective objective = Objective::LexMakespanThenCalls;
  int call_weight = 3;
  int call_priority = 1;
  int step_weight = 3;
  int step_priority = 2;
};

struct GossipProblem {
  int agents = 1;
  int secrets = 1;
  int depth = 0;
  int horizon = 0;
  ConnectivityGraph graph;
  InitialSpec initial = CanonicalInit{};
  GoalSpec goal;
  SharePolicy policy = ShareAll{};
  ConcurrencyMode mode = ConcurrencyMode::Parallel;
  OptimizationSpec objective;

  /// Complete graph, canonical initial state, full-depth goal.
  static GossipProblem classic(int agents, int depth, int horizon,
                               ConcurrencyMode mode = ConcurrencyMode::Parallel);
};

/// Throws ValidationError describing the first problem found.
void validate(const GossipProblem& problem);

/// Throws ValidationError when the constrained spec is unsatisfiable or
/// ambiguous, or has too many free choices to enumerate.
KnowledgeState initial_state(const InitialSpec& spec, const InfoUniverse& universe);

std::int64_t count_target(const GlobalCount& count, int agents, int secrets, int depth);

bool goal_satisfied(const KnowledgeState& state, const GoalSpec& goal, const InfoUniverse& universe);

/// Cost vector of a verified plan under the objective.
Cost plan_cost(const Plan& plan, const Verdict& verdict, const OptimizationSpec& objective);

/// The weak-constraint sums (priority 2, priority 1) as an ASP solver
/// would report them for this plan.
WeightedCost weighted_cost(const Plan& plan, const Verdict& verdict, const OptimizationSpec& objective);

/// Trace of `plan` from the problem's initial state over 0..horizon.
Trace simulate(const Plan& plan, const GossipProblem& problem);

/// Line-oriented problem file; see README for the directives.
GossipProblem parse_problem(std::string_view text);
GossipProblem load_problem(const std::string& path);
std::string render_problem(const GossipProblem& problem);

}  // namespace gossip
