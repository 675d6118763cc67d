#include "gossip/bench.hpp"

#include <cstdio>

namespace gossip {

std::optional<int> expected_calls(int agents) {
  static constexpr int table[] = {1, 3, 4, 6, 8, 10, 12, 14, 17, 20, 21, 25, 28, 31};
  if (agents < 2 || agents > 15) return std::nullopt;
  return table[agents - 2];
}

GossipProblem bench_problem(int agents, const BenchConfig& config) {
  GossipProblem p = GossipProblem::classic(agents, config.depth, config.horizon);
  switch (config.goal) {
    case BenchGoal::Secrets: p.goal = GoalSpec{{}, std::nullopt, FullDepth{0}}; break;
    case BenchGoal::RecursiveCount: p.goal = GoalSpec{{}, GlobalCount{CountTarget::Recursive}, std::nullopt}; break;
    case BenchGoal::FullDepth: break;
  }
  return p;
}

bool is_regression(const BenchRow& row) {
  if (!row.expected_calls) return false;
  if (!row.calls) return true;
  const auto expected = static_cast<std::size_t>(*row.expected_calls);
  return row.optimal ? *row.calls != expected : *row.calls > expected;
}

std::vector<BenchRow> run_bench(const BenchConfig& config, const std::function<void(const BenchRow&)>& on_row) {
  std::vector<BenchRow> rows;
  for (int n = config.first_agents; n <= config.last_agents; ++n) {
    SolveOptions options;
    options.budget.wall_seconds = config.budget_seconds;
    const SearchResult result = solve(bench_problem(n, config), options);

    BenchRow row;
    row.agents = n;
    row.wall_seconds = result.wall_seconds;
    row.optimal = result.proven_optimal;
    if (result.plan) {
      row.calls = result.plan->call_count();
      row.goal_time = static_cast<int>(result.cost.levels().front());
    }
    // The published counts are for the secrets goal at depth 1, m=5.
    if (config.goal == BenchGoal::Secrets && config.depth == 1 && config.horizon == 5) {
      row.expected_calls = expected_calls(n);
    }
    row.regression = is_regression(row);
    if (on_row) on_row(row);
    rows.push_back(row);
  }
  return rows;
}

std::string bench_header() { return "   n     time(s)  opt  calls  t  expected"; }

std::string format_bench_row(const BenchRow& row) {
  char buffer[128];
  const std::string calls = row.calls ? std::to_string(*row.calls) : "-";
  const std::string time = row.goal_time ? std::to_string(*row.goal_time) : "-";
  const std::string expected = row.expected_calls ? std::to_string(*row.expected_calls) : "-";
  std::snprintf(buffer, sizeof buffer, "%4d  %10.3f  %3s  %5s  %s  %8s%s", row.agents, row.wall_seconds,
                row.optimal ? "O" : "+", calls.c_str(), time.c_str(), expected.c_str(),
                row.regression ? "  REGRESSION" : "");
  return buffer;
}

}  // namespace gossip
