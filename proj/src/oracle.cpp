#include "gossip/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <string>

namespace gossip {

namespace {

// Kept apart from problem.cpp on purpose: the oracle must not share goal
// logic with the code it checks.
bool goal_holds(const KnowledgeState& state, const GoalSpec& goal, const InfoUniverse& universe) {
  const int n = universe.agent_count();
  for (const auto& literal : goal.literals) {
    const auto index = universe.index_of(literal.atom);
    const bool known = index && state.knows(literal.agent, *index);
    if (known != literal.positive) return false;
  }
  if (goal.count) {
    std::int64_t target = goal.count->constant;
    if (goal.count->target == CountTarget::Recursive) {
      target = count_atoms_recursive(n, universe.secret_count(), universe.max_depth());
    } else if (goal.count->target == CountTarget::Exact) {
      target = static_cast<std::int64_t>(universe.size());
    }
    std::int64_t pairs = 0;
    for (int i = 1; i <= n; ++i) {
      for (std::size_t a = 0; a < universe.size(); ++a) pairs += state.knows(AgentId{i}, a) ? 1 : 0;
    }
    if (pairs < target) return false;
  }
  if (goal.full_depth) {
    const int bound = goal.full_depth->max_depth.value_or(universe.max_depth());
    for (int i = 1; i <= n; ++i) {
      for (std::size_t a = 0; a < universe.size(); ++a) {
        if (universe.atom(a).depth() <= bound && !state.knows(AgentId{i}, a)) return false;
      }
    }
  }
  return true;
}

void merge_into(KnowledgeState& out, const KnowledgeState& delta) {
  for (int i = 1; i <= out.agent_count(); ++i) {
    auto dst = out.row(AgentId{i});
    auto src = delta.row(AgentId{i});
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
  }
}

struct Setup {
  InfoUniverse universe;
  CallSemantics semantics;
  KnowledgeState initial;

  explicit Setup(const GossipProblem& p)
      : universe(p.agents, p.secrets, p.depth),
        semantics(universe, p.graph, p.policy, p.mode),
        initial(initial_state(p.initial, universe)) {}
};

}  // namespace

Verdict verify(const Plan& plan, const GossipProblem& problem) {
  validate(problem);
  Setup setup(problem);
  const InfoUniverse& universe = setup.universe;

  Verdict verdict;
  verdict.call_count = plan.call_count();
  const int length = std::max(problem.horizon, plan.horizon());
  verdict.trace.states.push_back(setup.initial);

  for (int t = 0; t < length; ++t) {
    const KnowledgeState& pre = verdict.trace.states.back();
    KnowledgeState next = pre;
    if (const Round* round = plan.round_at(t)) {
      if (problem.mode == ConcurrencyMode::Sequential && round->calls.size() > 1) {
        verdict.violations.push_back({t, std::to_string(round->calls.size()) +
                                             " calls at time " + std::to_string(t) +
                                             " in sequential mode"});
      }
      std::vector<int> busy(static_cast<std::size_t>(problem.agents) + 1, 0);
      for (const auto& call : round->calls) {
        if (t >= problem.horizon) {
          verdict.violations.push_back({t, render_call(call) + " is at or beyond horizon " +
                                               std::to_string(problem.horizon)});
        }
        for (AgentId agent : {call.caller, call.callee}) {
          const int id = agent.value();
          if (id >= 1 && id <= problem.agents && busy[static_cast<std::size_t>(id)]++ == 1) {
            verdict.violations.push_back(
                {t, "agent " + std::to_string(id) + " is in two calls at time " + std::to_string(t)});
          }
        }
        try {
          merge_into(next, setup.semantics.apply_call(pre, call));
        } catch (const ValidationError& e) {
          verdict.violations.push_back({t, e.what()});
        }
      }
    }
    verdict.trace.states.push_back(std::move(next));
  }

  for (int t = 0; t <= problem.horizon && t < verdict.trace.length(); ++t) {
    if (goal_holds(verdict.trace.at(t), problem.goal, universe)) {
      verdict.goal_time = t;
      break;
    }
  }

  if (problem.goal.strict_negative) {
    for (const auto& literal : problem.goal.literals) {
      if (literal.positive) continue;
      const auto index = universe.index_of(literal.atom);
      if (!index) continue;
      for (int t = 0; t < verdict.trace.length(); ++t) {
        if (verdict.trace.at(t).knows(literal.agent, *index)) {
          verdict.violations.push_back({t, "agent " + std::to_string(literal.agent.value()) +
                                               " knows forbidden " + to_string(literal.atom) +
                                               " at time " + std::to_string(t)});
          break;
        }
      }
    }
  }
  return verdict;
}

namespace {

// Every set of directed calls that forms a legal round, the empty round
// included, built from edge masks with no cleverness.
std::vector<std::vector<std::pair<int, int>>> all_rounds(const GossipProblem& p) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= p.agents; ++i) {
    for (int j = 1; j <= p.agents; ++j) {
      if (i != j && p.graph.connected(AgentId{i}, AgentId{j})) edges.emplace_back(i, j);
    }
  }
  if (edges.size() > 24) throw InstanceTooLarge("too many edges for the oracle");
  std::vector<std::vector<std::pair<int, int>>> rounds;
  for (std::uint32_t mask = 0; mask < (1U << edges.size()); ++mask) {
    std::vector<std::pair<int, int>> calls;
    std::vector<int> seen(static_cast<std::size_t>(p.agents) + 1, 0);
    bool ok = true;
    for (std::size_t e = 0; e < edges.size() && ok; ++e) {
      if (((mask >> e) & 1U) == 0) continue;
      calls.push_back(edges[e]);
      ok = seen[static_cast<std::size_t>(edges[e].first)]++ == 0 &&
           seen[static_cast<std::size_t>(edges[e].second)]++ == 0;
    }
    if (!ok) continue;
    if (p.mode == ConcurrencyMode::Sequential && calls.size() > 1) continue;
    rounds.push_back(std::move(calls));
  }
  return rounds;
}

void subsets_of(const std::vector<std::size_t>& items, int low, int high,
                std::vector<std::vector<std::size_t>>& out) {
  const auto k = items.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    const int size = std::popcount(mask);
    if (size < low || size > high) continue;
    std::vector<std::size_t> chosen;
    for (std::size_t b = 0; b < k; ++b) {
      if ((mask >> b) & 1U) chosen.push_back(items[b]);
    }
    out.push_back(std::move(chosen));
  }
}

double binomial_sum(double n, int low, int high) {
  double total = 0;
  for (int k = low; k <= high; ++k) {
    total += std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
  }
  return total;
}

}  // namespace

std::optional<OracleOptimum> brute_force_optimal(const GossipProblem& problem, const OracleLimits& limits) {
  validate(problem);
  Setup setup(problem);
  const InfoUniverse& universe = setup.universe;
  const int makespan = std::min(limits.max_makespan, problem.horizon);
  const auto rounds = all_rounds(problem);
  const auto* bounded = std::get_if<BoundedShare>(&problem.policy);

  double choices = static_cast<double>(rounds.size());
  if (bounded != nullptr) {
    const int per_round = problem.mode == ConcurrencyMode::Sequential ? 1 : problem.agents / 2;
    const double sets = binomial_sum(static_cast<double>(universe.size()), 0,
                                     std::min<int>(bounded->max_atoms, static_cast<int>(universe.size())));
    choices *= std::pow(std::max(1.0, sets), 2.0 * per_round);
  }
  if (makespan > 0 && std::pow(choices, makespan) > limits.ceiling) {
    throw InstanceTooLarge("oracle guard: about " + std::to_string(choices) + "^" +
                           std::to_string(makespan) + " round sequences");
  }

  const Objective objective = problem.objective.objective;
  std::optional<OracleOptimum> best;
  std::vector<Call> path;

  auto consider = [&](int t, int calls) {
    Cost cost = Cost::of({});
    switch (objective) {
      case Objective::LexMakespanThenCalls: cost = Cost::of({t, calls}); break;
      case Objective::MinCalls: cost = Cost::of({calls}); break;
      case Objective::MinMakespan: cost = Cost::of({t}); break;
      case Objective::Satisficing: break;
    }
    if (!best || cost < best->cost) best = OracleOptimum{cost, Plan::from_calls(path)};
  };

  // Expands one call of a round at a time so bounded share sets can be
  // enumerated against the pre-round state.
  std::function<void(const KnowledgeState&, int, int, int)> descend;
  std::function<void(const KnowledgeState&, KnowledgeState&, const std::vector<std::pair<int, int>>&,
                     std::size_t, int, int, int)>
      expand;

  expand = [&](const KnowledgeState& pre, KnowledgeState& acc, const std::vector<std::pair<int, int>>& round,
               std::size_t k, int t, int calls, int target) {
    if (k == round.size()) {
      descend(acc, t + 1, calls + static_cast<int>(round.size()), target);
      return;
    }
    const AgentId caller{round[k].first};
    const AgentId callee{round[k].second};
    std::vector<std::optional<std::vector<InfoAtom>>> forward{std::nullopt};
    std::vector<std::optional<std::vector<InfoAtom>>> backward{std::nullopt};
    if (bounded != nullptr) {
      auto options = [&](AgentId from, AgentId to) {
        std::vector<std::optional<std::vector<InfoAtom>>> out;
        if (!problem.graph.connected(from, to)) {
          out.emplace_back(std::nullopt);
          return out;
        }
        const auto known = pre.known_atoms(from);
        const int size = static_cast<int>(known.size());
        std::vector<std::vector<std::size_t>> sets;
        subsets_of(known, std::min(bounded->min_atoms, size), std::min(bounded->max_atoms, size), sets);
        for (const auto& set : sets) {
          std::vector<InfoAtom> atoms;
          for (std::size_t a : set) atoms.push_back(universe.atom(a));
          out.emplace_back(std::move(atoms));
        }
        return out;
      };
      forward = options(caller, callee);
      backward = options(callee, caller);
    }
    for (const auto& f : forward) {
      for (const auto& b : backward) {
        Call call{caller, callee, t, f, b};
        KnowledgeState next = acc;
        merge_into(next, setup.semantics.apply_call(pre, call));
        path.push_back(call);
        expand(pre, next, round, k + 1, t, calls, target);
        path.pop_back();
      }
    }
  };

  descend = [&](const KnowledgeState& state, int t, int calls, int target) {
    if (calls > limits.max_calls) return;
    if (t == target) {
      if (goal_holds(state, problem.goal, universe)) consider(t, calls);
      return;
    }
    for (const auto& round : rounds) {
      KnowledgeState acc = state;
      expand(state, acc, round, 0, t, calls, target);
    }
  };

  for (int target = 0; target <= makespan; ++target) {
    descend(setup.initial, 0, 0, target);
    if (best && objective != Objective::MinCalls) break;
  }
  return best;
}

}  // namespace gossip
