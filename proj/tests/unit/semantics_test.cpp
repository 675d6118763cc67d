#include <doctest.h>

#include <algorithm>
#include <random>

#include "../random_problems.hpp"
#include "gossip/oracle.hpp"
#include "gossip/planner.hpp"

using namespace gossip;

namespace {

InfoAtom s(int k) { return InfoAtom::secret(SecretId{k}); }
InfoAtom kw(int i, const InfoAtom& inner) { return InfoAtom::knows_whether(AgentId{i}, inner); }
AgentId A(int i) { return AgentId{i}; }

struct World {
  InfoUniverse universe;
  ConnectivityGraph graph;
  SharePolicy policy;
  CallSemantics semantics;
  KnowledgeState initial;

  World(int n, int d, ConnectivityGraph g, SharePolicy p = ShareAll{},
        ConcurrencyMode mode = ConcurrencyMode::Parallel)
      : universe(n, n, d),
        graph(std::move(g)),
        policy(std::move(p)),
        semantics(universe, graph, policy, mode),
        initial(initial_state(CanonicalInit{}, universe)) {}

  std::vector<InfoAtom> known(const KnowledgeState& state, int agent) const {
    std::vector<InfoAtom> out;
    for (auto i : state.known_atoms(A(agent))) out.push_back(universe.atom(i));
    return out;
  }
  std::size_t idx(const InfoAtom& a) const { return universe.require_index(a); }
};

std::vector<InfoAtom> sorted(std::vector<InfoAtom> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Round round_of(std::initializer_list<std::pair<int, int>> calls, int t) {
  Round r{t, {}};
  for (auto [i, j] : calls) r.calls.push_back(make_call(i, j, t));
  return r;
}

}  // namespace

TEST_CASE("permitted") {
  World complete(3, 1, ConnectivityGraph::complete(3));
  CHECK(complete.semantics.permitted(complete.initial, A(1), A(2), complete.idx(s(1)), 0));
  CHECK_FALSE(complete.semantics.permitted(complete.initial, A(1), A(2), complete.idx(s(2)), 0));

  ConnectivityGraph one_way(3);
  one_way.add_edge(A(1), A(2));
  World w(3, 1, one_way);
  for (std::size_t a = 0; a < w.universe.size(); ++a) CHECK_FALSE(w.semantics.permitted(w.initial, A(2), A(1), a, 0));

  World b(2, 0, ConnectivityGraph::complete(2), BoundedShare{0, 1});
  KnowledgeState both = b.initial;
  both.learn(A(1), b.idx(s(2)));
  const std::optional<std::vector<InfoAtom>> only_first = std::vector<InfoAtom>{s(1)};
  CHECK(b.semantics.permitted(both, A(1), A(2), b.idx(s(1)), 0, only_first));
  CHECK_FALSE(b.semantics.permitted(both, A(1), A(2), b.idx(s(2)), 0, only_first));
  CHECK_THROWS_AS(b.semantics.permitted(both, A(1), A(2), b.idx(s(1)), 0), ValidationError);
}

TEST_CASE("apply_call examples") {
  World two(2, 0, ConnectivityGraph::complete(2));
  const auto after = two.semantics.apply_call(two.initial, make_call(1, 2, 0));
  CHECK(two.known(after, 1) == std::vector{s(1), s(2)});
  CHECK(two.known(after, 2) == std::vector{s(1), s(2)});

  World four(4, 1, ConnectivityGraph::complete(4));
  const auto x = four.semantics.apply_call(four.initial, make_call(1, 2, 0));
  CHECK(four.known(x, 1) == sorted({s(1), s(2), kw(2, s(2))}));
  CHECK(four.known(x, 2) == sorted({s(1), s(2), kw(1, s(1))}));
  CHECK(four.known(x, 3) == std::vector{s(3)});

  ConnectivityGraph g(2);
  g.add_edge(A(1), A(2));
  World one_way(2, 0, g);
  const auto y = one_way.semantics.apply_call(one_way.initial, make_call(1, 2, 0));
  CHECK(one_way.known(y, 2) == std::vector{s(1), s(2)});
  CHECK(one_way.known(y, 1) == std::vector{s(1)});
  CHECK_THROWS_AS(one_way.semantics.apply_call(one_way.initial, make_call(2, 1, 0)), ValidationError);
}

TEST_CASE("higher-order effects stop at the depth bound and skip introspection") {
  World w(3, 2, ConnectivityGraph::complete(3));
  auto st = w.semantics.apply_call(w.initial, make_call(1, 2, 0));
  st = w.semantics.apply_call(st, make_call(2, 3, 1));
  const auto k3 = w.known(st, 3);
  auto has = [&](const InfoAtom& a) { return std::find(k3.begin(), k3.end(), a) != k3.end(); };
  CHECK(has(kw(2, kw(1, s(1)))));
  CHECK(has(kw(2, s(1))));
  CHECK_FALSE(has(kw(2, kw(2, s(2)))));  // would be introspective
  // 2 knew kw(1,1) at depth 1; 3 gets kw(2,kw(1,1)); nothing of depth 3 exists.
  for (const auto& a : k3) CHECK(a.depth() <= 2);
}

TEST_CASE("blocked shares") {
  ShareAll policy;
  policy.blocked.insert(BlockedShare{A(1), A(2), s(1), 0});
  World w(2, 1, ConnectivityGraph::complete(2), policy);
  const auto st = w.semantics.apply_call(w.initial, make_call(1, 2, 0));
  CHECK(w.known(st, 2) == sorted({s(2)}));
  CHECK(w.known(st, 1) == sorted({s(1), s(2), kw(2, s(2))}));
  const auto later = w.semantics.apply_call(w.initial, make_call(1, 2, 1));
  CHECK(w.known(later, 2) == sorted({s(1), s(2), kw(1, s(1))}));
}

TEST_CASE("bounded shares") {
  World w(3, 0, ConnectivityGraph::complete(3), BoundedShare{1, 1});
  KnowledgeState st = w.initial;
  st.learn(A(1), w.idx(s(3)));
  Call c = make_call(1, 2, 0);
  c.caller_shares = std::vector{s(3)};
  c.callee_shares = std::vector{s(2)};
  const auto after = w.semantics.apply_call(st, c);
  CHECK(w.known(after, 2) == std::vector{s(2), s(3)});
  CHECK(w.known(after, 1) == std::vector{s(1), s(2), s(3)});

  c.caller_shares = std::vector{s(1), s(3)};
  CHECK_THROWS_AS(w.semantics.apply_call(st, c), ValidationError);  // too many
  c.caller_shares = std::vector<InfoAtom>{};
  CHECK_THROWS_AS(w.semantics.apply_call(st, c), ValidationError);  // too few
  c.caller_shares = std::vector{s(2)};
  CHECK_THROWS_AS(w.semantics.apply_call(st, c), ValidationError);  // not known
  c.caller_shares.reset();
  CHECK_THROWS_AS(w.semantics.apply_call(st, c), ValidationError);  // missing

  // ll above what the sender knows is clamped
  World big(2, 0, ConnectivityGraph::complete(2), BoundedShare{3, 5});
  Call d = make_call(1, 2, 0);
  d.caller_shares = std::vector{s(1)};
  d.callee_shares = std::vector{s(2)};
  CHECK(big.known(big.semantics.apply_call(big.initial, d), 2) == std::vector{s(1), s(2)});
}

TEST_CASE("apply_round examples") {
  World w(4, 0, ConnectivityGraph::complete(4));
  const auto st = w.semantics.apply_round(w.initial, round_of({{1, 2}, {4, 3}}, 0));
  CHECK(w.known(st, 1) == std::vector{s(1), s(2)});
  CHECK(w.known(st, 2) == std::vector{s(1), s(2)});
  CHECK(w.known(st, 3) == std::vector{s(3), s(4)});
  CHECK(w.known(st, 4) == std::vector{s(3), s(4)});
  CHECK(w.semantics.apply_round(w.initial, Round{0, {}}) == w.initial);
  try {
    w.semantics.apply_round(w.initial, round_of({{1, 2}, {3, 2}}, 0));
    FAIL("expected a matching violation");
  } catch (const MatchingViolation& e) {
    CHECK(e.agent() == A(2));
    CHECK(e.time() == 0);
  }

  World seq(3, 0, ConnectivityGraph::complete(3), ShareAll{}, ConcurrencyMode::Sequential);
  Round two = round_of({{1, 2}}, 0);
  two.calls.push_back(make_call(3, 1, 0));
  CHECK_THROWS_AS(seq.semantics.apply_round(seq.initial, two), MatchingViolation);
}

TEST_CASE("rounds read the pre-round state") {
  // 1-2 and 3-4 at once: 1 must not learn secret 3 via 2 in the same step.
  World w(4, 1, ConnectivityGraph::complete(4));
  auto st = w.semantics.apply_round(w.initial, round_of({{1, 2}}, 0));
  st = w.semantics.apply_round(st, round_of({{2, 3}, {1, 4}}, 1));
  const auto k1 = w.known(st, 1);
  CHECK(std::find(k1.begin(), k1.end(), s(3)) == k1.end());
  CHECK(std::find(k1.begin(), k1.end(), s(4)) != k1.end());
}

TEST_CASE("simulate") {
  World w(3, 0, ConnectivityGraph::complete(3));
  const auto empty = w.semantics.simulate(w.initial, Plan{}, 3);
  REQUIRE(empty.length() == 4);
  for (int t = 0; t < 4; ++t) CHECK(empty.at(t) == w.initial);

  World four(4, 1, ConnectivityGraph::complete(4));
  const Plan plan = parse_plan("call(1,2,0) call(4,3,0) call(2,3,1) call(1,4,1)");
  const auto trace = four.semantics.simulate(four.initial, plan, 2);
  REQUIRE(trace.length() == 3);
  for (int i = 1; i <= 4; ++i) {
    for (int k = 1; k <= 4; ++k) CHECK(trace.at(2).knows(A(i), four.idx(s(k))));
  }
  // Frozen from simulation: 4, 12 and 32 true (agent, atom) pairs.
  CHECK(trace.at(0).total_count() == 4);
  CHECK(trace.at(1).total_count() == 12);
  CHECK(trace.at(2).total_count() == 32);
}

TEST_CASE("random traces: monotone, framed, closed under depth") {
  std::mt19937 rng(7);
  int traces = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto p = gossip::testing::random_problem(rng, {4, 2, 4, 0});
    const auto rounds = enumerate_rounds(p);
    if (rounds.empty()) continue;
    InfoUniverse universe(p.agents, p.secrets, p.depth);
    CallSemantics sem(universe, p.graph, p.policy, p.mode);
    std::vector<Call> calls;
    for (int t = 0; t < p.horizon; ++t) {
      Round r = rounds[std::uniform_int_distribution<std::size_t>(0, rounds.size() - 1)(rng)];
      for (auto c : r.calls) {
        c.time = t;
        calls.push_back(c);
      }
    }
    const Plan plan = Plan::from_calls(calls);
    const Trace trace = sem.simulate(initial_state(p.initial, universe), plan, p.horizon);
    ++traces;
    for (int t = 0; t + 1 < trace.length(); ++t) {
      const auto& a = trace.at(t);
      const auto& b = trace.at(t + 1);
      CHECK(a.subset_of(b));
      CHECK(b.atom_count() == universe.size());
      std::vector<char> busy(static_cast<std::size_t>(p.agents) + 1, 0);
      if (const Round* r = plan.round_at(t)) {
        for (const auto& c : r->calls) busy[static_cast<std::size_t>(c.caller.value())] =
            busy[static_cast<std::size_t>(c.callee.value())] = 1;
      }
      for (int i = 1; i <= p.agents; ++i) {
        if (!busy[static_cast<std::size_t>(i)]) CHECK(std::ranges::equal(a.row(A(i)), b.row(A(i))));
      }
    }
  }
  CHECK(traces > 200);
}

TEST_CASE("exchange symmetry on two-way edges") {
  std::mt19937 rng(11);
  World w(4, 1, ConnectivityGraph::complete(4));
  for (int trial = 0; trial < 200; ++trial) {
    KnowledgeState st = w.initial;
    for (int k = 0; k < 12; ++k) {
      st.learn(A(std::uniform_int_distribution<int>(1, 4)(rng)),
               std::uniform_int_distribution<std::size_t>(0, w.universe.size() - 1)(rng));
    }
    const int i = std::uniform_int_distribution<int>(1, 4)(rng);
    const int j = i % 4 + 1;
    const auto after = w.semantics.apply_call(st, make_call(i, j, 0));
    for (int k = 1; k <= 4; ++k) {
      const auto idx = w.idx(s(k));
      const bool either = st.knows(A(i), idx) || st.knows(A(j), idx);
      CHECK(after.knows(A(i), idx) == either);
      CHECK(after.knows(A(j), idx) == either);
    }
  }
}

TEST_CASE("round order independence for n <= 4") {
  // Applying a round's calls one by one, each reading the pre-round state
  // and merging, gives apply_round's result in every order.
  for (int n = 2; n <= 4; ++n) {
    for (int d = 0; d <= 1; ++d) {
      GossipProblem p = GossipProblem::classic(n, d, 2);
      InfoUniverse universe(n, n, d);
      CallSemantics sem(universe, p.graph, p.policy, p.mode);
      KnowledgeState pre = initial_state(p.initial, universe);
      pre = sem.apply_call(pre, make_call(1, 2, 0));
      for (const auto& round : enumerate_rounds(p, 1)) {
        const auto expected = sem.apply_round(pre, round);
        auto calls = round.calls;
        std::sort(calls.begin(), calls.end());
        do {
          KnowledgeState acc = pre;
          for (const auto& c : calls) {
            const auto part = sem.apply_call(pre, c);
            for (int i = 1; i <= n; ++i) {
              auto dst = acc.row(A(i));
              auto src = part.row(A(i));
              for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
            }
          }
          CHECK(acc == expected);
        } while (std::next_permutation(calls.begin(), calls.end()));
      }
    }
  }
}
