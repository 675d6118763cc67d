#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gossip/problem.hpp"

namespace gossip {

struct SearchBudget {
  std::optional<double> wall_seconds;
  std::optional<std::uint64_t> node_limit;
};

enum class SearchOutcome {
  Optimal,          // exhaustive: the plan is optimal
  Feasible,         // budget ran out with a plan in hand
  NoPlan,           // exhaustive: nothing reaches the goal within the horizon
  BudgetExhausted,  // budget ran out before any plan was found
};

const char* to_string(SearchOutcome outcome);

struct SearchResult {
  std::optional<Plan> plan;
  Cost cost = Cost::infinite();
  bool proven_optimal = false;
  SearchOutcome outcome = SearchOutcome::BudgetExhausted;
  std::uint64_t nodes = 0;
  double wall_seconds = 0;
};

struct SolveOptions {
  SearchBudget budget;
  /// Called with each new incumbent; costs strictly decrease.
  std::function<void(const Plan&, const Cost&)> on_incumbent;
  /// Collapse states equal up to relabeling agents (with their secrets)
  /// when the problem is fully symmetric.
  bool symmetry = true;
};

SearchResult solve(const GossipProblem& problem, const SolveOptions& options = {});

/// Every nonempty legal round of directed calls at `time`: partial
/// matchings in parallel mode, single calls in sequential mode. Rounds are
/// sorted by their call lists.
std::vector<Round> enumerate_rounds(const GossipProblem& problem, int time = 0);

struct SearchNode {
  KnowledgeState profile;
  int time = 0;
  int calls = 0;
  std::vector<Round> path;
};

/// Visited profiles with the (time, calls) pairs they were reached at.
/// A lookup succeeds when a stored entry reached the same profile, or a
/// superset of it when supersets are allowed, no later and with no more
/// calls.
class DominanceCache {
 public:
  explicit DominanceCache(bool allow_superset = true, std::size_t superset_window = 64)
      : allow_superset_(allow_superset), window_(superset_window) {}

  bool dominated(std::span<const std::uint64_t> profile, std::size_t words_per_agent, int time,
                 int calls) const;
  void insert(std::span<const std::uint64_t> profile, std::size_t words_per_agent, int time, int calls);
  void clear();
  std::size_t size() const { return exact_.size(); }

  bool dominated(const SearchNode& node) const;
  void insert(const SearchNode& node);

 private:
  struct Stamp {
    int time;
    int calls;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& key) const;
  };

  bool allow_superset_;
  std::size_t window_;
  std::unordered_map<std::vector<std::uint64_t>, std::vector<Stamp>, KeyHash> exact_;
  std::vector<std::pair<std::vector<std::uint64_t>, Stamp>> recent_;
  std::size_t recent_next_ = 0;
};

/// Whether `node` cannot lead to anything better than `incumbent`, a
/// (goal time, calls) cost: it already used as many calls at an equal or
/// later time, or the cache holds a dominating profile.
bool prune(const SearchNode& node, const Cost& incumbent, const DominanceCache& cache);

}  // namespace gossip
