#include "gossip/planner.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

namespace gossip {

const char* to_string(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::Optimal: return "optimal";
    case SearchOutcome::Feasible: return "feasible";
    case SearchOutcome::NoPlan: return "no-plan";
    case SearchOutcome::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Dominance cache

std::size_t DominanceCache::KeyHash::operator()(const std::vector<std::uint64_t>& key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.size();
  for (std::uint64_t w : key) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

bool DominanceCache::dominated(std::span<const std::uint64_t> profile, std::size_t, int time,
                               int calls) const {
  const std::vector<std::uint64_t> key(profile.begin(), profile.end());
  if (auto it = exact_.find(key); it != exact_.end()) {
    for (const Stamp& s : it->second) {
      if (s.time <= time && s.calls <= calls) return true;
    }
  }
  if (!allow_superset_) return false;
  for (const auto& [stored, stamp] : recent_) {
    if (stamp.time > time || stamp.calls > calls || stored.size() != profile.size()) continue;
    bool covers = true;
    for (std::size_t w = 0; w < profile.size() && covers; ++w) covers = (profile[w] & ~stored[w]) == 0;
    if (covers) return true;
  }
  return false;
}

void DominanceCache::insert(std::span<const std::uint64_t> profile, std::size_t, int time, int calls) {
  std::vector<std::uint64_t> key(profile.begin(), profile.end());
  auto& stamps = exact_[key];
  std::erase_if(stamps, [&](const Stamp& s) { return s.time >= time && s.calls >= calls; });
  stamps.push_back({time, calls});
  if (!allow_superset_ || window_ == 0) return;
  if (recent_.size() < window_) {
    recent_.emplace_back(std::move(key), Stamp{time, calls});
  } else {
    recent_[recent_next_] = {std::move(key), Stamp{time, calls}};
    recent_next_ = (recent_next_ + 1) % window_;
  }
}

void DominanceCache::clear() {
  exact_.clear();
  recent_.clear();
  recent_next_ = 0;
}

namespace {

std::vector<std::uint64_t> flatten(const KnowledgeState& state) {
  std::vector<std::uint64_t> words;
  for (int i = 1; i <= state.agent_count(); ++i) {
    auto row = state.row(AgentId{i});
    words.insert(words.end(), row.begin(), row.end());
  }
  return words;
}

}  // namespace

bool DominanceCache::dominated(const SearchNode& node) const {
  return dominated(flatten(node.profile), node.profile.words_per_agent(), node.time, node.calls);
}

void DominanceCache::insert(const SearchNode& node) {
  insert(flatten(node.profile), node.profile.words_per_agent(), node.time, node.calls);
}

bool prune(const SearchNode& node, const Cost& incumbent, const DominanceCache& cache) {
  if (incumbent.finite()) {
    const auto& levels = incumbent.levels();
    if (levels.size() == 2 && node.time >= levels[0] && node.calls >= levels[1]) return true;
  }
  return cache.dominated(node);
}

// ---------------------------------------------------------------------------
// Round enumeration

std::vector<Round> enumerate_rounds(const GossipProblem& problem, int time) {
  const int n = problem.agents;
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j && problem.graph.connected(AgentId{i}, AgentId{j})) edges.emplace_back(i, j);
    }
  }
  std::vector<Round> out;
  std::vector<Call> current;
  std::vector<char> busy(static_cast<std::size_t>(n) + 1, 0);
  const bool sequential = problem.mode == ConcurrencyMode::Sequential;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t e = from; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      if (busy[static_cast<std::size_t>(i)] || busy[static_cast<std::size_t>(j)]) continue;
      current.push_back(make_call(i, j, time));
      out.push_back(Round{time, current});
      if (!sequential) {
        busy[static_cast<std::size_t>(i)] = busy[static_cast<std::size_t>(j)] = 1;
        self(self, e + 1);
        busy[static_cast<std::size_t>(i)] = busy[static_cast<std::size_t>(j)] = 0;
      }
      current.pop_back();
    }
  };
  extend(extend, 0);
  std::sort(out.begin(), out.end(), [](const Round& a, const Round& b) {
    return std::lexicographical_compare(a.calls.begin(), a.calls.end(), b.calls.begin(), b.calls.end());
  });
  return out;
}

// ---------------------------------------------------------------------------
// Search

namespace {

using Word = std::uint64_t;
using Clock = std::chrono::steady_clock;

// The problem restricted to the atoms that can influence the goal, with
// per-agent rows of bits.
struct Model {
  int n = 0;
  std::size_t atoms = 0;
  std::size_t words = 1;
  std::vector<std::size_t> full_index;
  std::vector<int> wrap;  // atom * n + (agent - 1) -> atom or -1
  bool has_wraps = false;
  std::vector<int> depth;
  std::vector<Word> required;
  std::vector<Word> forbidden;
  std::vector<Word> dangerous;
  std::vector<int> required_count;
  std::vector<Word> needers;  // per atom, mask of agents that must know it
  bool has_needs = false;
  bool has_forbidden = false;
  std::optional<std::int64_t> count_target;
  bool sequential = false;
  const BoundedShare* bounded = nullptr;
  std::map<std::tuple<int, int, int>, std::vector<Word>> blocked;
  bool symmetric = false;
  bool superset_ok = false;
  std::vector<std::pair<int, int>> pairs;  // one directed call per unordered pair
  std::vector<std::pair<bool, bool>> pair_edges;
  std::vector<Word> initial;
  int horizon = 0;
  std::vector<InfoAtom> atom_terms;

  Word* row(std::vector<Word>& state, int agent) const {
    return state.data() + static_cast<std::size_t>(agent - 1) * words;
  }
  const Word* row(const std::vector<Word>& state, int agent) const {
    return state.data() + static_cast<std::size_t>(agent - 1) * words;
  }
};

bool test_bit(const Word* row, std::size_t bit) { return (row[bit / 64] >> (bit % 64)) & 1U; }
void set_bit(Word* row, std::size_t bit) { row[bit / 64] |= Word{1} << (bit % 64); }

int popcount_row(const Word* row, std::size_t words) {
  int total = 0;
  for (std::size_t w = 0; w < words; ++w) total += std::popcount(row[w]);
  return total;
}

Model build_model(const GossipProblem& p, const InfoUniverse& universe, bool allow_symmetry) {
  Model m;
  m.n = p.agents;
  if (m.n > 64) throw ValidationError("the planner supports at most 64 agents");
  m.horizon = p.horizon;
  m.sequential = p.mode == ConcurrencyMode::Sequential;
  m.bounded = std::get_if<BoundedShare>(&p.policy);

  // Relevant atoms: the goal's atoms closed under stripping the outer kw.
  // Count goals and bounded sharing look at every atom.
  std::vector<char> relevant(universe.size(), 0);
  const bool everything = m.bounded != nullptr || p.goal.count.has_value();
  if (everything) {
    std::fill(relevant.begin(), relevant.end(), 1);
  } else {
    auto mark = [&](std::size_t index) {
      while (index != kNoAtom && !relevant[index]) {
        relevant[index] = 1;
        index = universe.unwrap(index);
      }
    };
    for (const auto& literal : p.goal.literals) mark(universe.require_index(literal.atom));
    if (p.goal.full_depth) {
      const int bound = p.goal.full_depth->max_depth.value_or(p.depth);
      for (std::size_t a = 0; a < universe.size(); ++a) {
        if (universe.depth_of(a) <= bound) mark(a);
      }
    }
  }
  std::vector<int> rel_of(universe.size(), -1);
  for (std::size_t a = 0; a < universe.size(); ++a) {
    if (!relevant[a]) continue;
    rel_of[a] = static_cast<int>(m.full_index.size());
    m.full_index.push_back(a);
    m.atom_terms.push_back(universe.atom(a));
    m.depth.push_back(universe.depth_of(a));
  }
  m.atoms = m.full_index.size();
  m.words = std::max<std::size_t>(1, (m.atoms + 63) / 64);

  m.wrap.assign(m.atoms * static_cast<std::size_t>(m.n), -1);
  for (std::size_t a = 0; a < m.atoms; ++a) {
    for (int x = 1; x <= m.n; ++x) {
      const std::size_t wrapped = universe.wrap(AgentId{x}, m.full_index[a]);
      if (wrapped != kNoAtom && rel_of[wrapped] >= 0) {
        m.wrap[a * static_cast<std::size_t>(m.n) + static_cast<std::size_t>(x - 1)] = rel_of[wrapped];
        m.has_wraps = true;
      }
    }
  }

  const std::size_t cells = static_cast<std::size_t>(m.n) * m.words;
  m.required.assign(cells, 0);
  m.forbidden.assign(cells, 0);
  m.dangerous.assign(m.words, 0);
  m.needers.assign(m.atoms, 0);
  if (p.goal.full_depth) {
    const int bound = p.goal.full_depth->max_depth.value_or(p.depth);
    for (int i = 1; i <= m.n; ++i) {
      for (std::size_t a = 0; a < m.atoms; ++a) {
        if (m.depth[a] <= bound) set_bit(m.row(m.required, i), a);
      }
    }
  }
  for (const auto& literal : p.goal.literals) {
    std::size_t index = static_cast<std::size_t>(rel_of[universe.require_index(literal.atom)]);
    if (literal.positive) {
      set_bit(m.row(m.required, literal.agent.value()), index);
    } else {
      set_bit(m.row(m.forbidden, literal.agent.value()), index);
      m.has_forbidden = true;
      for (std::size_t full = m.full_index[index]; full != kNoAtom; full = universe.unwrap(full)) {
        set_bit(m.dangerous.data(), static_cast<std::size_t>(rel_of[full]));
      }
    }
  }
  m.required_count.assign(static_cast<std::size_t>(m.n) + 1, 0);
  for (int i = 1; i <= m.n; ++i) {
    const Word* req = m.row(m.required, i);
    m.required_count[static_cast<std::size_t>(i)] = popcount_row(req, m.words);
    for (std::size_t a = 0; a < m.atoms; ++a) {
      if (test_bit(req, a)) {
        m.needers[a] |= Word{1} << (i - 1);
        m.has_needs = true;
      }
    }
  }
  if (p.goal.count) {
    m.count_target = count_target(*p.goal.count, p.agents, p.secrets, p.depth);
  }

  if (const auto* all = std::get_if<ShareAll>(&p.policy)) {
    for (const auto& b : all->blocked) {
      const auto index = universe.index_of(b.atom);
      if (!index || rel_of[*index] < 0) continue;
      auto& mask = m.blocked[{b.sender.value(), b.receiver.value(), b.time}];
      mask.resize(m.words, 0);
      set_bit(mask.data(), static_cast<std::size_t>(rel_of[*index]));
    }
  }
  m.superset_ok = m.bounded == nullptr && !m.has_forbidden && m.blocked.empty();

  for (int i = 1; i <= m.n; ++i) {
    for (int j = i + 1; j <= m.n; ++j) {
      const bool forward = p.graph.connected(AgentId{i}, AgentId{j});
      const bool backward = p.graph.connected(AgentId{j}, AgentId{i});
      if (!forward && !backward) continue;
      m.pairs.emplace_back(forward ? i : j, forward ? j : i);
      m.pair_edges.emplace_back(true, forward && backward);
    }
  }

  const KnowledgeState start = initial_state(p.initial, universe);
  m.initial.assign(cells, 0);
  for (int i = 1; i <= m.n; ++i) {
    for (std::size_t a = 0; a < m.atoms; ++a) {
      if (start.knows(AgentId{i}, m.full_index[a])) set_bit(m.row(m.initial, i), a);
    }
  }

  // Relabeling agents together with their secrets maps solutions to
  // solutions when nothing in the problem singles out an agent.
  bool secrets_only = m.atoms == static_cast<std::size_t>(p.secrets);
  for (std::size_t a = 0; a < m.atoms && secrets_only; ++a) secrets_only = m.depth[a] == 0;
  m.symmetric = allow_symmetry && secrets_only && p.secrets == p.agents && p.goal.literals.empty() &&
                p.graph.is_complete() && std::holds_alternative<CanonicalInit>(p.initial) &&
                m.bounded == nullptr && m.blocked.empty();
  return m;
}

// Canonical relabeling for the symmetric case: iterated color refinement
// on the agent/secret incidence matrix, ties broken by index. Equal keys
// always mean equivalent states; equivalent states do not always get
// equal keys.
std::vector<Word> canonical_key(const Model& m, const std::vector<Word>& state) {
  const int n = m.n;
  std::vector<Word> cols(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (Word row = state[static_cast<std::size_t>(i)]; row != 0; row &= row - 1) {
      cols[static_cast<std::size_t>(std::countr_zero(row))] |= Word{1} << i;
    }
  }
  std::vector<int> color(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    color[static_cast<std::size_t>(i)] = std::popcount(state[static_cast<std::size_t>(i)]) * 65 +
                                         std::popcount(cols[static_cast<std::size_t>(i)]);
  }
  std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
  for (int round = 0; round < n; ++round) {
    for (int i = 0; i < n; ++i) {
      auto& s = sig[static_cast<std::size_t>(i)];
      s.clear();
      s.push_back(color[static_cast<std::size_t>(i)]);
      std::vector<int> out, in;
      for (Word row = state[static_cast<std::size_t>(i)]; row != 0; row &= row - 1) {
        out.push_back(color[static_cast<std::size_t>(std::countr_zero(row))]);
      }
      for (Word col = cols[static_cast<std::size_t>(i)]; col != 0; col &= col - 1) {
        in.push_back(color[static_cast<std::size_t>(std::countr_zero(col))]);
      }
      std::sort(out.begin(), out.end());
      std::sort(in.begin(), in.end());
      s.push_back(-1);
      s.insert(s.end(), out.begin(), out.end());
      s.push_back(-2);
      s.insert(s.end(), in.begin(), in.end());
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return sig[static_cast<std::size_t>(a)] < sig[static_cast<std::size_t>(b)];
    });
    std::vector<int> next(static_cast<std::size_t>(n));
    int classes = 0;
    for (int k = 0; k < n; ++k) {
      if (k > 0 && sig[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] !=
                       sig[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])]) {
        ++classes;
      }
      next[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = classes;
    }
    const int before = static_cast<int>(
        std::set<int>(color.begin(), color.end()).size());
    color = next;
    if (classes + 1 == before || classes + 1 == n) break;
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return color[static_cast<std::size_t>(a)] < color[static_cast<std::size_t>(b)];
  });
  std::vector<int> position(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) position[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
  std::vector<Word> key(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    Word mapped = 0;
    for (Word row = state[static_cast<std::size_t>(i)]; row != 0; row &= row - 1) {
      mapped |= Word{1} << position[static_cast<std::size_t>(std::countr_zero(row))];
    }
    key[static_cast<std::size_t>(position[static_cast<std::size_t>(i)])] = mapped;
  }
  return key;
}

struct ChildCall {
  int pair = 0;
  std::vector<Word> forward;   // bounded only
  std::vector<Word> backward;  // bounded only
};

struct Child {
  std::vector<Word> state;
  std::vector<ChildCall> calls;
  int lower = 0;
  int known = 0;
  bool goal = false;
};

class Search {
 public:
  Search(const GossipProblem& problem, const Model& model, const SolveOptions& options)
      : p_(problem), m_(model), options_(options), cache_(model.superset_ok) {
    start_ = Clock::now();
  }

  SearchResult run() {
    const Objective objective = p_.objective.objective;
    for (int limit = 0; limit <= p_.horizon && !stopped_; ++limit) {
      limit_ = limit;
      cache_.clear();
      visit(m_.initial, 0, 0);
      if (best_ && objective != Objective::MinCalls) break;
    }
    SearchResult result;
    result.nodes = nodes_;
    result.wall_seconds = elapsed();
    result.cost = best_cost_;
    result.plan = best_;
    result.proven_optimal = best_.has_value() && !stopped_;
    if (stopped_) {
      result.outcome = best_ ? SearchOutcome::Feasible : SearchOutcome::BudgetExhausted;
    } else {
      result.outcome = best_ ? SearchOutcome::Optimal : SearchOutcome::NoPlan;
    }
    return result;
  }

 private:
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  bool out_of_budget() {
    if (stopped_) return true;
    const auto& budget = options_.budget;
    if (budget.node_limit && nodes_ >= *budget.node_limit) stopped_ = true;
    if (budget.wall_seconds && (nodes_ & 255U) == 0 && elapsed() >= *budget.wall_seconds) stopped_ = true;
    return stopped_;
  }

  Cost cost_of(int time, int calls) const {
    switch (p_.objective.objective) {
      case Objective::LexMakespanThenCalls: return Cost::of({time, calls});
      case Objective::MinCalls: return Cost::of({calls});
      case Objective::MinMakespan: return Cost::of({time});
      case Objective::Satisficing: return Cost::of({});
    }
    return Cost::infinite();
  }

  // Calls allowed for a node that still has to beat the incumbent.
  int call_bound() const {
    if (!best_) return 1 << 30;
    const Objective objective = p_.objective.objective;
    if (objective == Objective::LexMakespanThenCalls || objective == Objective::MinCalls) {
      return static_cast<int>(best_cost_.levels().back());
    }
    return -1;
  }

  bool goal(const std::vector<Word>& state) const {
    for (int i = 1; i <= m_.n; ++i) {
      const Word* row = m_.row(state, i);
      const Word* req = m_.row(m_.required, i);
      const Word* bad = m_.row(m_.forbidden, i);
      for (std::size_t w = 0; w < m_.words; ++w) {
        if ((req[w] & ~row[w]) != 0 || (bad[w] & row[w]) != 0) return false;
      }
    }
    if (m_.count_target) {
      std::int64_t total = 0;
      for (Word w : state) total += std::popcount(w);
      if (total < *m_.count_target) return false;
    }
    return true;
  }

  bool leaked(const std::vector<Word>& state) const {
    if (!m_.has_forbidden) return false;
    for (std::size_t w = 0; w < state.size(); ++w) {
      if ((state[w] & m_.forbidden[w]) != 0) return true;
    }
    return false;
  }

  // Lower bound on the calls still needed from `state` with `rounds`
  // rounds left, or -1 when the goal is out of reach.
  int lower_bound(const std::vector<Word>& state, int rounds) const {
    const int n = m_.n;
    const int capacity = m_.sequential ? 1 : n / 2;
    int bound = 0;
    int needy = 0;
    int max_known = 0;
    for (int i = 1; i <= n; ++i) {
      const Word* row = m_.row(state, i);
      max_known = std::max(max_known, popcount_row(row, m_.words));
      const Word* req = m_.row(m_.required, i);
      for (std::size_t w = 0; w < m_.words; ++w) {
        if ((req[w] & ~row[w]) != 0) {
          ++needy;
          break;
        }
      }
    }
    if (needy > 0 && rounds == 0) return -1;
    bound = (needy + 1) / 2;

    int before_last = 0;
    if (m_.has_needs) {
      for (std::size_t a = 0; a < m_.atoms; ++a) {
        if (m_.needers[a] == 0) continue;
        Word holders = 0;
        for (int i = 1; i <= n; ++i) {
          if (test_bit(m_.row(state, i), a)) holders |= Word{1} << (i - 1);
        }
        const int missing = std::popcount(m_.needers[a] & ~holders);
        if (missing == 0) continue;
        const int h = std::popcount(holders);
        std::int64_t reach;
        if (m_.sequential) {
          reach = rounds;
        } else {
          const std::int64_t grow = std::int64_t{1} << std::min(rounds, 40);
          reach = m_.depth[a] == 0 ? h * (grow - 1) : (h + 1) * grow - 1 - h;
        }
        if (missing > reach) return -1;
        bound = std::max(bound, missing);
        const int target = h + missing;
        const int half = m_.depth[a] == 0 ? (target + 1) / 2 : target / 2;
        before_last = std::max(before_last, half - h);
      }
    }

    // Agents that cannot be complete one round before the end must be in
    // a call in the final round.
    if (needy > 0 && rounds >= 1) {
      const std::int64_t growth = m_.has_wraps || m_.bounded ? 3 : 2;
      std::int64_t reach = max_known;
      for (int r = 1; r < rounds && reach < (1 << 20); ++r) reach *= growth;
      int forced = 0;
      for (int i = 1; i <= n; ++i) {
        const Word* row = m_.row(state, i);
        const Word* req = m_.row(m_.required, i);
        bool missing = false;
        for (std::size_t w = 0; w < m_.words && !missing; ++w) missing = (req[w] & ~row[w]) != 0;
        if (missing && reach < m_.required_count[static_cast<std::size_t>(i)]) ++forced;
      }
      if (forced > 2 * capacity) return -1;
      const int last = (forced + 1) / 2;
      if (!m_.sequential && rounds >= 2) bound = std::max(bound, last + before_last);
      bound = std::max(bound, last);
    }

    if (m_.count_target) {
      std::int64_t total = 0;
      int min_known = static_cast<int>(m_.atoms);
      for (int i = 1; i <= n; ++i) {
        const int known = popcount_row(m_.row(state, i), m_.words);
        total += known;
        min_known = std::min(min_known, known);
      }
      const std::int64_t deficit = *m_.count_target - total;
      if (deficit > 0) {
        const std::int64_t per_call = 2 * (static_cast<std::int64_t>(m_.atoms) - min_known);
        if (per_call <= 0) return -1;
        bound = std::max<int>(bound, static_cast<int>((deficit + per_call - 1) / per_call));
      }
    }
    if (bound > rounds * capacity) return -1;
    return bound;
  }

  // receiver row |= what sender passes; returns whether anything changed.
  bool transfer(const std::vector<Word>& pre, std::vector<Word>& out, int sender, int receiver, int time,
                const Word* selection) const {
    const Word* from = m_.row(pre, sender);
    Word* to = m_.row(out, receiver);
    const Word* blocked = nullptr;
    if (!m_.blocked.empty()) {
      if (auto it = m_.blocked.find({sender, receiver, time}); it != m_.blocked.end()) blocked = it->second.data();
    }
    bool changed = false;
    for (std::size_t w = 0; w < m_.words; ++w) {
      Word mask = from[w];
      if (blocked) mask &= ~blocked[w];
      if (selection) mask &= selection[w];
      if (!m_.has_wraps) {
        changed |= (mask & ~to[w]) != 0;
        to[w] |= mask;
        continue;
      }
      for (Word bits = mask; bits != 0; bits &= bits - 1) {
        const std::size_t a = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        if (!test_bit(to, a)) {
          set_bit(to, a);
          changed = true;
        }
        const int wrapped = m_.wrap[a * static_cast<std::size_t>(m_.n) + static_cast<std::size_t>(sender - 1)];
        if (wrapped >= 0 && !test_bit(to, static_cast<std::size_t>(wrapped))) {
          set_bit(to, static_cast<std::size_t>(wrapped));
          changed = true;
        }
      }
    }
    return changed;
  }

  // Candidate share sets for one bounded direction: any subset of the
  // dangerous atoms, topped up with as many other atoms as the bound allows.
  std::vector<std::vector<Word>> share_options(const std::vector<Word>& pre, int sender) const {
    const Word* known = m_.row(pre, sender);
    std::vector<std::size_t> risky, safe;
    for (std::size_t a = 0; a < m_.atoms; ++a) {
      if (!test_bit(known, a)) continue;
      (test_bit(m_.dangerous.data(), a) ? risky : safe).push_back(a);
    }
    const int count = static_cast<int>(risky.size() + safe.size());
    const int low = std::min(m_.bounded->min_atoms, count);
    const int high = std::min(m_.bounded->max_atoms, count);
    if (risky.size() > 16) throw ValidationError("too many forbidden-related atoms for bounded branching");
    std::vector<std::vector<Word>> out;
    for (std::uint32_t mask = 0; mask < (1U << risky.size()); ++mask) {
      std::vector<Word> base(m_.words, 0);
      for (std::size_t b = 0; b < risky.size(); ++b) {
        if ((mask >> b) & 1U) set_bit(base.data(), risky[b]);
      }
      const int chosen = std::popcount(mask);
      if (chosen > high) continue;
      if (chosen + static_cast<int>(safe.size()) <= high) {
        if (chosen + static_cast<int>(safe.size()) < low) continue;
        for (std::size_t a : safe) set_bit(base.data(), a);
        out.push_back(std::move(base));
        continue;
      }
      const int take = high - chosen;
      std::vector<int> pick(static_cast<std::size_t>(take));
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        std::vector<Word> set = base;
        for (int k : pick) set_bit(set.data(), safe[static_cast<std::size_t>(k)]);
        out.push_back(std::move(set));
        int k = take - 1;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == static_cast<int>(safe.size()) - take + k) --k;
        if (k < 0) break;
        ++pick[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < take; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return out;
  }

  bool satisfied_agent(const std::vector<Word>& state, int agent) const {
    const Word* row = m_.row(state, agent);
    const Word* req = m_.row(m_.required, agent);
    for (std::size_t w = 0; w < m_.words; ++w) {
      if ((req[w] & ~row[w]) != 0) return false;
    }
    return true;
  }

  bool leaked_agent(const std::vector<Word>& state, int agent) const {
    if (!m_.has_forbidden) return false;
    const Word* row = m_.row(state, agent);
    const Word* bad = m_.row(m_.forbidden, agent);
    for (std::size_t w = 0; w < m_.words; ++w) {
      if ((bad[w] & row[w]) != 0) return true;
    }
    return false;
  }

  struct Builder {
    const std::vector<Word>* pre;
    std::vector<Word> acc;
    std::vector<char> used;
    std::vector<ChildCall> calls;
    int time;
    bool last;
    std::vector<Child>* out;
  };

  void build(Builder& b, int from) {
    int agent = from;
    while (agent <= m_.n && b.used[static_cast<std::size_t>(agent)]) ++agent;
    if (agent > m_.n) {
      if (!b.calls.empty() || !m_.blocked.empty()) b.out->push_back(Child{b.acc, b.calls, 0, 0, false});
      return;
    }
    // Idle.
    if (!b.last || satisfied_agent(b.acc, agent)) {
      b.used[static_cast<std::size_t>(agent)] = 1;
      build(b, agent + 1);
      b.used[static_cast<std::size_t>(agent)] = 0;
    }
    for (std::size_t k = 0; k < m_.pairs.size(); ++k) {
      const auto [x, y] = m_.pairs[k];
      const int other = x == agent ? y : (y == agent ? x : 0);
      if (other <= agent || b.used[static_cast<std::size_t>(other)]) continue;
      if (m_.sequential && !b.calls.empty()) continue;
      const bool two_way = m_.pair_edges[k].second;
      std::vector<std::vector<Word>> forward{{}}, backward{{}};
      if (m_.bounded) {
        forward = share_options(*b.pre, x);
        if (two_way) backward = share_options(*b.pre, y);
      }
      const std::size_t w = m_.words;
      std::vector<Word> saved_x(m_.row(b.acc, x), m_.row(b.acc, x) + w);
      std::vector<Word> saved_y(m_.row(b.acc, y), m_.row(b.acc, y) + w);
      for (const auto& f : forward) {
        for (const auto& g : backward) {
          bool changed = transfer(*b.pre, b.acc, x, y, b.time, m_.bounded ? f.data() : nullptr);
          if (two_way) changed |= transfer(*b.pre, b.acc, y, x, b.time, m_.bounded ? g.data() : nullptr);
          const bool ok = changed && !leaked_agent(b.acc, x) && !leaked_agent(b.acc, y) &&
                          (!b.last || (satisfied_agent(b.acc, x) && satisfied_agent(b.acc, y)));
          if (ok) {
            b.used[static_cast<std::size_t>(x)] = b.used[static_cast<std::size_t>(y)] = 1;
            b.calls.push_back(ChildCall{static_cast<int>(k), m_.bounded ? f : std::vector<Word>{},
                                        m_.bounded && two_way ? g : std::vector<Word>{}});
            if (m_.sequential) {
              b.out->push_back(Child{b.acc, b.calls, 0, 0, false});
            } else {
              build(b, agent + 1);
            }
            b.calls.pop_back();
            b.used[static_cast<std::size_t>(x)] = b.used[static_cast<std::size_t>(y)] = 0;
          }
          std::copy(saved_x.begin(), saved_x.end(), m_.row(b.acc, x));
          std::copy(saved_y.begin(), saved_y.end(), m_.row(b.acc, y));
        }
      }
    }
  }

  Round decode(const std::vector<ChildCall>& calls, int time) const {
    Round round{time, {}};
    for (const auto& c : calls) {
      const auto [x, y] = m_.pairs[static_cast<std::size_t>(c.pair)];
      Call call = make_call(x, y, time);
      if (m_.bounded) {
        auto atoms_of = [&](const std::vector<Word>& set) {
          std::vector<InfoAtom> atoms;
          for (std::size_t a = 0; a < m_.atoms; ++a) {
            if (test_bit(set.data(), a)) atoms.push_back(m_.atom_terms[a]);
          }
          return atoms;
        };
        call.caller_shares = atoms_of(c.forward);
        if (m_.pair_edges[static_cast<std::size_t>(c.pair)].second) call.callee_shares = atoms_of(c.backward);
      }
      round.calls.push_back(std::move(call));
    }
    std::sort(round.calls.begin(), round.calls.end());
    return round;
  }

  void record(int time, int calls) {
    const Cost cost = cost_of(time, calls);
    if (best_ && !(cost < best_cost_)) return;
    std::vector<Call> all;
    for (const auto& round : path_) all.insert(all.end(), round.calls.begin(), round.calls.end());
    best_ = Plan::from_calls(std::move(all));
    best_cost_ = cost;
    const Objective objective = p_.objective.objective;
    if (objective == Objective::MinMakespan || objective == Objective::Satisficing) found_final_ = true;
    if (options_.on_incumbent) options_.on_incumbent(*best_, best_cost_);
  }

  std::vector<Word> key_of(const std::vector<Word>& state, int time) const {
    std::vector<Word> key = m_.symmetric ? canonical_key(m_, state) : state;
    if (!m_.blocked.empty()) key.push_back(static_cast<Word>(time));
    return key;
  }

  void visit(const std::vector<Word>& state, int time, int calls) {
    ++nodes_;
    if (out_of_budget() || found_final_) return;
    if (time == 0) {
      if (leaked(state)) return;
      if (goal(state)) {
        record(0, 0);
        return;
      }
    }
    const int rounds = limit_ - time;
    const int lb = lower_bound(state, rounds);
    if (lb < 0 || calls + lb >= call_bound()) return;
    const auto key = key_of(state, time);
    if (cache_.dominated(key, m_.words, time, calls)) return;
    cache_.insert(key, m_.words, time, calls);
    if (rounds == 0) return;

    std::vector<Child> children;
    Builder b{&state, state, std::vector<char>(static_cast<std::size_t>(m_.n) + 1, 0), {}, time,
              rounds == 1, &children};
    build(b, 1);

    const int bound = call_bound();
    std::vector<Child> kept;
    kept.reserve(children.size());
    for (auto& child : children) {
      const int spent = calls + static_cast<int>(child.calls.size());
      if (spent >= bound) continue;
      if (leaked(child.state)) continue;
      if (goal(child.state)) {
        path_.push_back(decode(child.calls, time));
        record(time + 1, spent);
        path_.pop_back();
        continue;
      }
      const int child_lb = lower_bound(child.state, rounds - 1);
      if (child_lb < 0 || spent + child_lb >= bound) continue;
      child.lower = spent + child_lb;
      for (Word w : child.state) child.known += std::popcount(w);
      kept.push_back(std::move(child));
    }
    if (found_final_) return;
    std::stable_sort(kept.begin(), kept.end(), [](const Child& a, const Child& b) {
      if (a.lower != b.lower) return a.lower < b.lower;
      return a.known > b.known;
    });
    for (const auto& child : kept) {
      if (stopped_ || found_final_) return;
      const int spent = calls + static_cast<int>(child.calls.size());
      if (child.lower >= call_bound()) continue;
      path_.push_back(decode(child.calls, time));
      visit(child.state, time + 1, spent);
      path_.pop_back();
    }
  }

  const GossipProblem& p_;
  const Model& m_;
  const SolveOptions& options_;
  DominanceCache cache_;
  Clock::time_point start_;
  int limit_ = 0;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  bool found_final_ = false;
  std::optional<Plan> best_;
  Cost best_cost_ = Cost::infinite();
  std::vector<Round> path_;
};

}  // namespace

SearchResult solve(const GossipProblem& problem, const SolveOptions& options) {
  validate(problem);
  const InfoUniverse universe(problem.agents, problem.secrets, problem.depth);
  const Model model = build_model(problem, universe, options.symmetry);
  Search search(problem, model, options);
  return search.run();
}

}  // namespace gossip
