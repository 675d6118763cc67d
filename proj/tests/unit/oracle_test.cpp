#include <doctest.h>

#include <algorithm>
#include <random>

#include "../random_problems.hpp"
#include "gossip/oracle.hpp"
#include "gossip/planner.hpp"

using namespace gossip;

namespace {

InfoAtom relabel(const InfoAtom& atom, const std::vector<int>& perm) {
  InfoAtom out = InfoAtom::secret(SecretId{perm[static_cast<std::size_t>(atom.base_secret().value())]});
  const auto& chain = atom.agent_chain();
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    out = InfoAtom::knows_whether(AgentId{perm[static_cast<std::size_t>(it->value())]}, out);
  }
  return out;
}

// Agents and their secrets renamed together (secrets == agents).
GossipProblem relabel(const GossipProblem& p, const std::vector<int>& perm) {
  GossipProblem q = p;
  q.graph = ConnectivityGraph(p.agents);
  for (auto [a, b] : p.graph.edges()) {
    q.graph.add_edge(AgentId{perm[static_cast<std::size_t>(a.value())]},
                     AgentId{perm[static_cast<std::size_t>(b.value())]});
  }
  for (auto& l : q.goal.literals) {
    l.agent = AgentId{perm[static_cast<std::size_t>(l.agent.value())]};
    l.atom = relabel(l.atom, perm);
  }
  return q;
}

}  // namespace

TEST_CASE("oracle examples") {
  CHECK(brute_force_optimal(GossipProblem::classic(2, 0, 5))->cost == Cost::of({1, 1}));

  OracleLimits limits;
  limits.max_makespan = 5;
  limits.max_calls = 6;
  const auto four = brute_force_optimal(GossipProblem::classic(4, 0, 5), limits);
  REQUIRE(four);
  CHECK(four->cost == Cost::of({2, 4}));
  CHECK(verify(four->plan, GossipProblem::classic(4, 0, 5)).solved());

  GossipProblem cut = GossipProblem::classic(2, 0, 3);
  cut.graph = ConnectivityGraph(2);
  CHECK_FALSE(brute_force_optimal(cut).has_value());

  // Not enough calls allowed.
  limits.max_calls = 3;
  CHECK_FALSE(brute_force_optimal(GossipProblem::classic(4, 0, 5), limits).has_value());
}

TEST_CASE("oracle guard") {
  CHECK_THROWS_AS(brute_force_optimal(GossipProblem::classic(6, 0, 5)), InstanceTooLarge);
  GossipProblem bounded = GossipProblem::classic(4, 1, 4);
  bounded.policy = BoundedShare{0, 4};
  CHECK_THROWS_AS(brute_force_optimal(bounded), InstanceTooLarge);
}

TEST_CASE("the count goal at depth 1 needs only three calls") {
  // 20 pairs are reachable at t=2 with three calls: 1-2, then 1-4 and 2-3.
  GossipProblem p = GossipProblem::classic(4, 1, 2);
  p.goal = GoalSpec{{}, GlobalCount{CountTarget::Recursive, 0}, std::nullopt};
  const auto best = brute_force_optimal(p);
  REQUIRE(best);
  CHECK(best->cost == Cost::of({2, 3}));
  CHECK(solve(p).cost == Cost::of({2, 3}));
}

TEST_CASE("planner matches the oracle on random small problems") {
  std::mt19937 rng(2024);
  int compared = 0, negative = 0, sequential = 0, directed = 0;
  for (int trial = 0; trial < 400 && compared < 150; ++trial) {
    const auto p = gossip::testing::random_problem(rng, {4, 1, 3, 0.2});
    std::optional<OracleOptimum> expected;
    try {
      expected = brute_force_optimal(p);
    } catch (const InstanceTooLarge&) {
      continue;
    }
    const auto got = solve(p);
    CAPTURE(render_problem(p));
    REQUIRE((got.outcome == SearchOutcome::Optimal || got.outcome == SearchOutcome::NoPlan));
    CHECK(got.cost == (expected ? expected->cost : Cost::infinite()));
    ++compared;
    negative += p.goal.has_negative() ? 1 : 0;
    sequential += p.mode == ConcurrencyMode::Sequential ? 1 : 0;
    directed += p.graph.is_symmetric() ? 0 : 1;
  }
  CHECK(compared >= 50);
  CHECK(negative >= 10);
  CHECK(sequential >= 10);
  CHECK(directed >= 10);
}

TEST_CASE("planner matches the oracle under other objectives") {
  std::mt19937 rng(99);
  int compared = 0;
  const Objective objectives[] = {Objective::MinCalls, Objective::MinMakespan, Objective::Satisficing};
  for (int trial = 0; trial < 300 && compared < 90; ++trial) {
    auto p = gossip::testing::random_problem(rng, {4, 1, 3, 0.2});
    p.objective.objective = objectives[trial % 3];
    std::optional<OracleOptimum> expected;
    try {
      expected = brute_force_optimal(p);
    } catch (const InstanceTooLarge&) {
      continue;
    }
    CAPTURE(render_problem(p));
    CHECK(solve(p).cost == (expected ? expected->cost : Cost::infinite()));
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("planner matches the oracle with bounded sharing and blocks") {
  std::mt19937 rng(404);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 60; ++trial) {
    auto p = gossip::testing::random_problem(rng, {3, 1, 3, 0.5});
    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng) == 0) {
      const int high = std::uniform_int_distribution<int>(1, 2)(rng);
      p.policy = BoundedShare{0, high};
    } else {
      ShareAll all;
      for (int k = 0; k < 3; ++k) {
        const auto edges = p.graph.edges();
        const auto [from, to] = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
        all.blocked.insert(BlockedShare{from, to, gossip::testing::random_atom(rng, p.agents, p.secrets, p.depth),
                                        std::uniform_int_distribution<int>(0, p.horizon - 1)(rng)});
      }
      p.policy = all;
    }
    std::optional<OracleOptimum> expected;
    try {
      expected = brute_force_optimal(p);
    } catch (const InstanceTooLarge&) {
      continue;
    }
    CAPTURE(render_problem(p));
    const auto got = solve(p);
    CHECK(got.cost == (expected ? expected->cost : Cost::infinite()));
    if (got.plan) CHECK(verify(*got.plan, p).solved());
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("oracle is invariant under relabeling") {
  std::mt19937 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto p = gossip::testing::random_problem(rng, {3, 1, 3, 0.3});
    std::vector<int> perm(static_cast<std::size_t>(p.agents) + 1);
    for (int i = 0; i <= p.agents; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    const auto a = brute_force_optimal(p);
    const auto b = brute_force_optimal(relabel(p, perm));
    CHECK(a.has_value() == b.has_value());
    if (a && b) CHECK(a->cost == b->cost);
    ++checked;
  }
  CHECK(checked == 80);
}

TEST_CASE("verify agrees with plan_cost on random plans") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = gossip::testing::random_problem(rng, {4, 1, 4, 0.2});
    const auto rounds = enumerate_rounds(p);
    if (rounds.empty()) continue;
    std::vector<Call> calls;
    for (int t = 0; t < p.horizon; ++t) {
      for (auto c : rounds[std::uniform_int_distribution<std::size_t>(0, rounds.size() - 1)(rng)].calls) {
        c.time = t;
        calls.push_back(c);
      }
    }
    const Plan plan = Plan::from_calls(calls);
    const auto v = verify(plan, p);
    REQUIRE(v.valid());
    const auto cost = plan_cost(plan, v, p.objective);
    if (v.goal_time) {
      CHECK(cost == Cost::of({*v.goal_time, static_cast<std::int64_t>(plan.call_count())}));
    } else {
      CHECK(cost == Cost::infinite());
    }
  }
}
