#include "gossip/problem.hpp"

#include <algorithm>
#include <string>

namespace gossip {

std::string to_string(const Cost& cost) {
  if (!cost.finite()) return "inf";
  std::string out = "(";
  for (std::size_t i = 0; i < cost.levels().size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(cost.levels()[i]);
  }
  return out + ")";
}

bool GoalSpec::has_negative() const {
  return std::any_of(literals.begin(), literals.end(), [](const GoalLiteral& l) { return !l.positive; });
}

GossipProblem GossipProblem::classic(int agents, int depth, int horizon, ConcurrencyMode mode) {
  GossipProblem problem;
  problem.agents = agents;
  problem.secrets = agents;
  problem.depth = depth;
  problem.horizon = horizon;
  problem.graph = ConnectivityGraph::complete(agents);
  problem.goal.full_depth = FullDepth{};
  problem.mode = mode;
  return problem;
}

namespace {

void check_atom(const GossipProblem& p, const InfoAtom& atom, const std::string& where) {
  if (!is_well_formed(atom, p.agents, p.secrets, p.depth)) {
    throw ValidationError(where + ": atom " + to_string(atom) + " is not well-formed for n=" +
                          std::to_string(p.agents) + " s=" + std::to_string(p.secrets) +
                          " d=" + std::to_string(p.depth));
  }
}

void check_agent(const GossipProblem& p, AgentId agent, const std::string& where) {
  if (agent.value() < 1 || agent.value() > p.agents) {
    throw ValidationError(where + ": unknown agent " + std::to_string(agent.value()));
  }
}

}  // namespace

void validate(const GossipProblem& p) {
  if (p.agents < 1) throw ValidationError("agents must be >= 1");
  if (p.secrets < 1) throw ValidationError("secrets must be >= 1");
  if (p.depth < 0) throw ValidationError("depth must be >= 0");
  if (p.horizon < 0) throw ValidationError("horizon must be >= 0");
  if (p.graph.agent_count() != p.agents) {
    throw ValidationError("graph is over " + std::to_string(p.graph.agent_count()) +
                          " agents, problem has " + std::to_string(p.agents));
  }

  if (const auto* spec = std::get_if<ConstrainedInit>(&p.initial)) {
    for (const auto& r : spec->required) {
      check_agent(p, r.agent, "init require");
      check_atom(p, r.atom, "init require");
    }
    for (const auto& f : spec->forbidden) {
      check_agent(p, f.agent, "init forbid");
      check_atom(p, f.atom, "init forbid");
      if (std::find(spec->required.begin(), spec->required.end(), f) != spec->required.end()) {
        throw ValidationError("initial spec both requires and forbids agent " +
                              std::to_string(f.agent.value()) + " knowing " + to_string(f.atom));
      }
    }
    if (spec->secret_bounds) {
      const auto [low, high] = *spec->secret_bounds;
      if (low < 0 || low > high) throw ValidationError("init bounds need 0 <= l <= u");
    }
  }

  for (const auto& literal : p.goal.literals) {
    check_agent(p, literal.agent, "goal literal");
    check_atom(p, literal.atom, "goal literal");
  }
  if (p.goal.count && p.goal.count->target == CountTarget::Constant && p.goal.count->constant < 0) {
    throw ValidationError("goal count must be >= 0");
  }
  if (p.goal.full_depth && p.goal.full_depth->max_depth) {
    const int bound = *p.goal.full_depth->max_depth;
    if (bound < 0 || bound > p.depth) {
      throw ValidationError("full-depth goal bound " + std::to_string(bound) +
                            " outside 0.." + std::to_string(p.depth));
    }
  }

  if (const auto* bounded = std::get_if<BoundedShare>(&p.policy)) {
    if (bounded->min_atoms < 0 || bounded->min_atoms > bounded->max_atoms) {
      throw ValidationError("share bounds need 0 <= ll <= uu");
    }
  } else {
    for (const auto& blocked : std::get<ShareAll>(p.policy).blocked) {
      check_agent(p, blocked.sender, "share block");
      check_agent(p, blocked.receiver, "share block");
      check_atom(p, blocked.atom, "share block");
    }
  }

  const auto& o = p.objective;
  if (o.call_weight <= 0 || o.step_weight <= 0) throw ValidationError("weights must be positive");
}

KnowledgeState initial_state(const InitialSpec& spec, const InfoUniverse& universe) {
  const int n = universe.agent_count();
  const int s = universe.secret_count();
  KnowledgeState state(n, universe.size());

  if (std::holds_alternative<CanonicalInit>(spec)) {
    for (int i = 1; i <= std::min(n, s); ++i) {
      state.learn(AgentId{i}, universe.secret_index(SecretId{i}));
    }
    return state;
  }

  const auto& c = std::get<ConstrainedInit>(spec);
  // -2 closed-world false, -1 free, 0 false, 1 true. Only depth-0 pairs
  // start free; deeper atoms are unknown unless required.
  std::vector<int> fixed(static_cast<std::size_t>(n) * universe.size(), -2);
  auto cell = [&](int agent, std::size_t atom) -> int& {
    return fixed[static_cast<std::size_t>(agent - 1) * universe.size() + atom];
  };
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= s; ++k) {
      const std::size_t atom = universe.secret_index(SecretId{k});
      cell(i, atom) = c.canonical_base ? (i == k ? 1 : 0) : -1;
    }
  }
  auto fix = [&](const AgentAtom& pair, int value) {
    const std::size_t atom = universe.require_index(pair.atom);
    int& slot = cell(pair.agent.value(), atom);
    if (slot >= 0 && slot != value) {
      throw ValidationError("initial spec is contradictory about agent " +
                            std::to_string(pair.agent.value()) + " knowing " + to_string(pair.atom));
    }
    slot = value;
  };
  for (const auto& r : c.required) fix(r, 1);
  for (const auto& f : c.forbidden) fix(f, 0);

  std::vector<std::size_t> free_cells;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i] == -2) fixed[i] = 0;
    if (fixed[i] == -1) free_cells.push_back(i);
  }
  constexpr std::size_t kMaxFree = 22;
  if (free_cells.size() > kMaxFree) {
    throw ValidationError("initial spec leaves " + std::to_string(free_cells.size()) +
                          " free choices; too many to check for a unique state");
  }

  auto satisfies = [&](const std::vector<int>& cells) {
    if (c.secret_bounds) {
      for (int i = 1; i <= n; ++i) {
        int known = 0;
        for (int k = 1; k <= s; ++k) {
          known += cells[static_cast<std::size_t>(i - 1) * universe.size() +
                         universe.secret_index(SecretId{k})];
        }
        if (known < c.secret_bounds->first || known > c.secret_bounds->second) return false;
      }
    }
    if (c.unique) {
      for (std::size_t atom = 0; atom < universe.size(); ++atom) {
        int holders = 0;
        for (int i = 1; i <= n; ++i) {
          holders += cells[static_cast<std::size_t>(i - 1) * universe.size() + atom];
        }
        if (holders > 1) return false;
      }
    }
    return true;
  };

  std::optional<std::vector<int>> found;
  std::vector<int> cells = fixed;
  const std::uint64_t combos = std::uint64_t{1} << free_cells.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    for (std::size_t b = 0; b < free_cells.size(); ++b) {
      cells[free_cells[b]] = static_cast<int>((mask >> b) & 1U);
    }
    if (!satisfies(cells)) continue;
    if (found) throw ValidationError("initial spec admits more than one state");
    found = cells;
  }
  if (!found) throw ValidationError("initial spec is unsatisfiable");

  for (int i = 1; i <= n; ++i) {
    for (std::size_t atom = 0; atom < universe.size(); ++atom) {
      if ((*found)[static_cast<std::size_t>(i - 1) * universe.size() + atom] == 1) {
        state.learn(AgentId{i}, atom);
      }
    }
  }
  return state;
}

std::int64_t count_target(const GlobalCount& count, int agents, int secrets, int depth) {
  switch (count.target) {
    case CountTarget::Constant: return count.constant;
    case CountTarget::Recursive: return count_atoms_recursive(agents, secrets, depth);
    case CountTarget::Exact: return count_atoms(agents, secrets, depth);
  }
  return count.constant;
}

bool goal_satisfied(const KnowledgeState& state, const GoalSpec& goal, const InfoUniverse& universe) {
  for (const auto& literal : goal.literals) {
    const std::size_t atom = universe.require_index(literal.atom);
    if (state.knows(literal.agent, atom) != literal.positive) return false;
  }
  if (goal.count) {
    const auto target = count_target(*goal.count, universe.agent_count(), universe.secret_count(),
                                      universe.max_depth());
    if (static_cast<std::int64_t>(state.total_count()) < target) return false;
  }
  if (goal.full_depth) {
    const int bound = goal.full_depth->max_depth.value_or(universe.max_depth());
    for (int i = 1; i <= universe.agent_count(); ++i) {
      for (std::size_t atom = 0; atom < universe.size(); ++atom) {
        if (universe.depth_of(atom) <= bound && !state.knows(AgentId{i}, atom)) return false;
      }
    }
  }
  return true;
}

Cost plan_cost(const Plan& plan, const Verdict& verdict, const OptimizationSpec& objective) {
  if (!verdict.solved()) return Cost::infinite();
  const auto time = static_cast<std::int64_t>(*verdict.goal_time);
  const auto calls = static_cast<std::int64_t>(plan.call_count());
  switch (objective.objective) {
    case Objective::LexMakespanThenCalls: return Cost::of({time, calls});
    case Objective::MinCalls: return Cost::of({calls});
    case Objective::MinMakespan: return Cost::of({time});
    case Objective::Satisficing: return Cost::of({});
  }
  return Cost::infinite();
}

WeightedCost weighted_cost(const Plan& plan, const Verdict& verdict, const OptimizationSpec& objective) {
  if (!verdict.solved()) throw GossipError("weighted cost of a plan that does not reach the goal");
  WeightedCost cost;
  const bool steps = objective.objective == Objective::LexMakespanThenCalls ||
                     objective.objective == Objective::MinMakespan;
  const bool calls = objective.objective == Objective::LexMakespanThenCalls ||
                     objective.objective == Objective::MinCalls;
  if (steps) cost.priority2 = static_cast<std::int64_t>(objective.step_weight) * *verdict.goal_time;
  if (calls) {
    cost.priority1 = static_cast<std::int64_t>(objective.call_weight) *
                     static_cast<std::int64_t>(plan.call_count());
  }
  return cost;
}

Trace simulate(const Plan& plan, const GossipProblem& problem) {
  validate(problem);
  InfoUniverse universe(problem.agents, problem.secrets, problem.depth);
  CallSemantics semantics(universe, problem.graph, problem.policy, problem.mode);
  return semantics.simulate(initial_state(problem.initial, universe), plan, problem.horizon);
}

}  // namespace gossip
