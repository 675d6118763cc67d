// gossip: solve, verify, emit and benchmark gossip planning problems.
//
// Exit status: 0 plan found (or verified), 1 invalid input, 2 no plan
// within the horizon (bench: some row regressed), 3 budget exhausted
// without a plan.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gossip/asp.hpp"
#include "gossip/bench.hpp"
#include "gossip/oracle.hpp"

namespace {

using gossip::Cost;
using gossip::GossipProblem;
using gossip::Plan;
using json = nlohmann::json;

enum Exit { kFound = 0, kInvalid = 1, kNoPlan = 2, kBudget = 3 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gossip::ParseError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json cost_json(const Cost& cost) {
  if (!cost.finite()) return nullptr;
  return cost.levels();
}

json plan_json(const Plan& plan) {
  json calls = json::array();
  for (const auto& c : plan.calls()) calls.push_back(gossip::render_call(c));
  return {{"calls", calls}, {"plan", gossip::render_plan(plan)}};
}

struct Flags {
  std::optional<double> budget;
  std::optional<std::uint64_t> nodes;
  bool json = false;
  std::string solver;
};

int run_solve(const std::string& file, const Flags& flags) {
  const GossipProblem problem = gossip::parse_problem(slurp(file));
  gossip::SolveOptions options;
  options.budget.wall_seconds = flags.budget;
  options.budget.node_limit = flags.nodes;
  const auto result = gossip::solve(problem, options);

  std::optional<gossip::CrossCheckReport> check;
  if (!flags.solver.empty()) {
    check = gossip::cross_check(problem, gossip::SolverHandle{flags.solver, {}}, options);
  } else if (auto env = gossip::solver_from_environment()) {
    check = gossip::cross_check(problem, env, options);
  }

  if (flags.json) {
    json out = {{"status", gossip::to_string(result.outcome)},
                {"cost", cost_json(result.cost)},
                {"optimal", result.proven_optimal},
                {"nodes", result.nodes},
                {"seconds", result.wall_seconds}};
    if (result.plan) out.update(plan_json(*result.plan));
    if (check) out["cross_check"] = {{"status", gossip::to_string(check->status)}, {"detail", check->detail}};
    std::cout << out.dump(2) << "\n";
  } else {
    if (result.plan) std::cout << gossip::render_plan(*result.plan);
    std::cout << "status " << gossip::to_string(result.outcome) << "\n";
    if (result.plan) {
      std::cout << "cost " << gossip::to_string(result.cost) << " " << (result.proven_optimal ? "O" : "+") << "\n";
    }
    if (check) std::cout << "cross-check " << gossip::to_string(check->status) << ": " << check->detail << "\n";
  }
  switch (result.outcome) {
    case gossip::SearchOutcome::Optimal:
    case gossip::SearchOutcome::Feasible: return kFound;
    case gossip::SearchOutcome::NoPlan: return kNoPlan;
    case gossip::SearchOutcome::BudgetExhausted: return kBudget;
  }
  return kFound;
}

int run_verify(const std::string& file, const std::string& plan_file, const Flags& flags) {
  const GossipProblem problem = gossip::parse_problem(slurp(file));
  const Plan plan = gossip::parse_plan(slurp(plan_file));
  const auto verdict = gossip::verify(plan, problem);

  if (flags.json) {
    json violations = json::array();
    for (const auto& v : verdict.violations) violations.push_back({{"time", v.time}, {"what", v.description}});
    json out = {{"valid", verdict.valid()},
                {"solved", verdict.solved()},
                {"goal_time", verdict.goal_time ? json(*verdict.goal_time) : json(nullptr)},
                {"calls", verdict.call_count},
                {"violations", violations}};
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& v : verdict.violations) std::cout << "violation at " << v.time << ": " << v.description << "\n";
    std::cout << (verdict.valid() ? "valid" : "invalid") << "\n";
    std::cout << "goal time " << (verdict.goal_time ? std::to_string(*verdict.goal_time) : "never") << "\n";
    std::cout << "calls " << verdict.call_count << "\n";
  }
  if (!verdict.valid()) return kInvalid;
  return verdict.solved() ? kFound : kNoPlan;
}

int run_oracle(const std::string& file, int max_makespan, const Flags& flags) {
  const GossipProblem problem = gossip::parse_problem(slurp(file));
  gossip::OracleLimits limits;
  limits.max_makespan = max_makespan;
  const auto best = gossip::brute_force_optimal(problem, limits);
  if (flags.json) {
    json out = {{"cost", best ? cost_json(best->cost) : json(nullptr)}};
    if (best) out.update(plan_json(best->plan));
    std::cout << out.dump(2) << "\n";
  } else if (best) {
    std::cout << gossip::render_plan(best->plan) << "cost " << gossip::to_string(best->cost) << "\n";
  } else {
    std::cout << "no plan\n";
  }
  return best ? kFound : kNoPlan;
}

int run_bench(const gossip::BenchConfig& config, const Flags& flags) {
  if (!flags.json) std::cout << gossip::bench_header() << "\n";
  json rows = json::array();
  bool regression = false;
  gossip::run_bench(config, [&](const gossip::BenchRow& row) {
    regression = regression || row.regression;
    if (flags.json) {
      rows.push_back({{"n", row.agents},
                      {"seconds", row.wall_seconds},
                      {"flag", row.optimal ? "O" : "+"},
                      {"calls", row.calls ? json(*row.calls) : json(nullptr)},
                      {"goal_time", row.goal_time ? json(*row.goal_time) : json(nullptr)},
                      {"expected", row.expected_calls ? json(*row.expected_calls) : json(nullptr)},
                      {"regression", row.regression}});
    } else {
      std::cout << gossip::format_bench_row(row) << std::endl;
    }
  });
  if (flags.json) std::cout << rows.dump(2) << "\n";
  return regression ? kNoPlan : kFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip problem planner, verifier and ASP encoder"};
  app.require_subcommand(1);
  Flags flags;
  auto common = [&](CLI::App* sub, bool search = true) {
    if (search) {
      sub->add_option("--budget", flags.budget, "wall-clock budget in seconds");
      sub->add_option("--nodes", flags.nodes, "search node limit");
    }
    sub->add_flag("--json", flags.json, "machine-readable output");
  };

  std::string file;
  std::string plan_file;

  auto* solve = app.add_subcommand("solve", "find an optimal plan");
  solve->add_option("FILE", file, "problem file")->required();
  solve->add_option("--solver", flags.solver, "ASP solver executable to cross-check against");
  common(solve);

  auto* verify = app.add_subcommand("verify", "check a plan against a problem");
  verify->add_option("FILE", file, "problem file")->required();
  verify->add_option("PLANFILE", plan_file, "plan file")->required();
  common(verify, false);

  auto* emit = app.add_subcommand("emit-asp", "print the ASP encoding");
  emit->add_option("FILE", file, "problem file")->required();

  int max_makespan = 5;
  auto* oracle = app.add_subcommand("oracle", "brute-force optimum (small instances only)");
  oracle->add_option("FILE", file, "problem file")->required();
  oracle->add_option("--max-makespan", max_makespan, "deepest makespan tried")->capture_default_str();
  common(oracle, false);

  gossip::BenchConfig bench_config;
  std::string bench_goal = "secrets";
  auto* bench = app.add_subcommand("bench", "complete-graph table for a range of n");
  bench->add_option("--from", bench_config.first_agents)->capture_default_str();
  bench->add_option("--to", bench_config.last_agents)->capture_default_str();
  bench->add_option("--depth", bench_config.depth)->capture_default_str();
  bench->add_option("--horizon", bench_config.horizon)->capture_default_str();
  bench->add_option("--goal", bench_goal, "secrets | count | full-depth")
      ->check(CLI::IsMember({"secrets", "count", "full-depth"}))
      ->capture_default_str();
  bench->add_option("--budget", bench_config.budget_seconds, "seconds per instance")->capture_default_str();
  bench->add_flag("--json", flags.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  try {
    if (*solve) return run_solve(file, flags);
    if (*verify) return run_verify(file, plan_file, flags);
    if (*emit) {
      std::cout << gossip::emit_asp(gossip::parse_problem(slurp(file)));
      return kFound;
    }
    if (*oracle) return run_oracle(file, max_makespan, flags);
    if (*bench) {
      bench_config.goal = bench_goal == "count"        ? gossip::BenchGoal::RecursiveCount
                          : bench_goal == "full-depth" ? gossip::BenchGoal::FullDepth
                                                       : gossip::BenchGoal::Secrets;
      return run_bench(bench_config, flags);
    }
  } catch (const gossip::GossipError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
