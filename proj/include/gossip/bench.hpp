#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gossip/planner.hpp"

namespace gossip {

/// Goal used for the bench instances. Secrets: every agent learns every
/// secret (full depth 0 over the depth-1 universe). RecursiveCount: global
/// count with the recursive target. FullDepth: every atom up to the
/// universe depth.
enum class BenchGoal { Secrets, RecursiveCount, FullDepth };

struct BenchConfig {
  int first_agents = 2;
  int last_agents = 10;
  int depth = 1;
  int horizon = 5;
  double budget_seconds = 10;
  BenchGoal goal = BenchGoal::Secrets;
};

struct BenchRow {
  int agents = 0;
  double wall_seconds = 0;
  bool optimal = false;  // printed as O, otherwise +
  std::optional<std::size_t> calls;
  std::optional<int> goal_time;
  std::optional<int> expected_calls;
  bool regression = false;
};

/// Published call counts for complete graphs, m=5, n=2..15.
std::optional<int> expected_calls(int agents);

GossipProblem bench_problem(int agents, const BenchConfig& config);

/// Against the published count: an optimal row must match it, and a
/// best-found row must not exceed it.
bool is_regression(const BenchRow& row);

std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row = {});

std::string format_bench_row(const BenchRow& row);
std::string bench_header();

}  // namespace gossip
