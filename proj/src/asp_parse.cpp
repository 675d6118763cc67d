#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include <sys/wait.h>

#include "gossip/asp.hpp"
#include "gossip/oracle.hpp"

namespace gossip {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

// Splits the inside of `name(...)` at top-level commas.
std::vector<std::string> arguments_of(const std::string& token, std::size_t name_length) {
  if (token.size() < name_length + 2 || token.back() != ')') {
    throw ParseError("malformed atom '" + token + "' in answer set");
  }
  std::vector<std::string> out(1);
  int nesting = 0;
  for (std::size_t i = name_length + 1; i + 1 < token.size(); ++i) {
    const char c = token[i];
    if (c == '(') ++nesting;
    if (c == ')') --nesting;
    if (c == ',' && nesting == 0) {
      out.emplace_back();
      continue;
    }
    out.back().push_back(c);
  }
  return out;
}

int to_int(const std::string& text, const std::string& token) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw ParseError("malformed atom '" + token + "' in answer set: expected an integer, got '" + text + "'");
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

const char* to_string(CrossCheckStatus status) {
  switch (status) {
    case CrossCheckStatus::Skipped: return "skipped";
    case CrossCheckStatus::Agree: return "agree";
    case CrossCheckStatus::Disagree: return "disagree";
    case CrossCheckStatus::Error: return "error";
  }
  return "?";
}

AnswerSet parse_answer_set(std::string_view text) {
  AnswerSet result;
  if (text.find("UNSATISFIABLE") != std::string_view::npos) result.satisfiable = false;
  if (text.find("OPTIMUM FOUND") != std::string_view::npos) result.optimum_proven = true;

  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) lines.push_back(line);
  }
  std::size_t first = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (starts_with(lines[i], "Answer:")) first = i + 1;
  }

  std::vector<Call> calls;
  // (sender, receiver, time) -> atoms the sender may pass on
  std::map<std::tuple<int, int, int>, std::vector<InfoAtom>> permitted;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (starts_with(line, "Optimization:")) {
      result.optimization.clear();
      std::istringstream values(line.substr(13));
      for (std::int64_t v; values >> v;) result.optimization.push_back(v);
      continue;
    }
    if (starts_with(line, "Answer:")) continue;
    std::istringstream tokens(line);
    for (std::string token; tokens >> token;) {
      if (starts_with(token, "call(")) {
        const Plan one = parse_plan(token);
        if (one.call_count() != 1) throw ParseError("malformed call atom '" + token + "' in answer set");
        calls.push_back(one.calls().front());
      } else if (starts_with(token, "permitted(")) {
        const auto args = arguments_of(token, 9);
        if (args.size() != 4) throw ParseError("malformed atom '" + token + "' in answer set");
        permitted[{to_int(args[0], token), to_int(args[1], token), to_int(args[3], token)}].push_back(
            parse_atom(args[2]));
      }
    }
  }
  for (auto& call : calls) {
    const int i = call.caller.value();
    const int j = call.callee.value();
    if (auto it = permitted.find({i, j, call.time}); it != permitted.end()) call.caller_shares = it->second;
    if (auto it = permitted.find({j, i, call.time}); it != permitted.end()) call.callee_shares = it->second;
  }
  result.plan = Plan::from_calls(std::move(calls));
  return result;
}

std::optional<SolverHandle> solver_from_environment() {
  const char* value = std::getenv("GOSSIP_ASP_SOLVER");
  if (value == nullptr || *value == '\0') return std::nullopt;
  std::istringstream words(value);
  SolverHandle handle;
  words >> handle.executable;
  for (std::string w; words >> w;) handle.arguments.push_back(w);
  return handle;
}

namespace {

std::string run_solver(const SolverHandle& solver, const std::string& program) {
  namespace fs = std::filesystem;
  const fs::path file = fs::temp_directory_path() /
                        ("gossip-" + std::to_string(std::hash<std::string>{}(program)) + "-" +
                         std::to_string(std::rand()) + ".lp");
  {
    std::ofstream out(file);
    if (!out) throw GossipError("cannot write " + file.string());
    out << program;
  }
  std::string command = shell_quote(solver.executable);
  for (const auto& a : solver.arguments) command += " " + shell_quote(a);
  command += " " + shell_quote(file.string()) + " 2>&1";

  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) {
    fs::remove(file);
    throw GossipError("cannot start " + solver.executable);
  }
  std::string output;
  std::array<char, 4096> buffer{};
  while (const std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe)) output.append(buffer.data(), got);
  const int status = pclose(pipe);
  fs::remove(file);
  // clingo's exit code encodes the search result (10, 20, 30, ...), so
  // only a shell failure to run the command counts.
  if (status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    throw GossipError("solver command not found: " + solver.executable);
  }
  return output;
}

}  // namespace

CrossCheckReport cross_check(const GossipProblem& problem, const std::optional<SolverHandle>& solver,
                             const SolveOptions& options) {
  CrossCheckReport report;
  if (!solver) {
    report.detail = "no solver configured";
    return report;
  }
  try {
    const SearchResult native = solve(problem, options);
    report.native_cost = native.cost;

    const AnswerSet answer = parse_answer_set(run_solver(*solver, emit_asp(problem)));
    if (!answer.satisfiable) {
      const bool agree = native.outcome == SearchOutcome::NoPlan;
      report.status = agree ? CrossCheckStatus::Agree : CrossCheckStatus::Disagree;
      report.detail = agree ? "both find no plan" : "solver reports unsatisfiable, planner found " + to_string(native.cost);
      return report;
    }

    Plan plan = answer.plan;
    {
      // permitted/4 atoms show up under either policy; only bounded sharing
      // wants them, and there a missing direction means nothing was shared.
      const bool bounded = std::holds_alternative<BoundedShare>(problem.policy);
      std::vector<Call> calls = plan.calls();
      for (auto& c : calls) {
        if (!bounded) {
          c.caller_shares = c.callee_shares = std::nullopt;
          continue;
        }
        if (!c.caller_shares) c.caller_shares.emplace();
        if (!c.callee_shares) c.callee_shares.emplace();
      }
      plan = Plan::from_calls(std::move(calls));
    }
    report.solver_plan = plan;
    const Verdict verdict = verify(plan, problem);
    if (!verdict.solved()) {
      report.status = CrossCheckStatus::Disagree;
      report.detail = verdict.valid() ? "solver plan does not reach the goal"
                                      : "solver plan is invalid: " + verdict.violations.front().description;
      return report;
    }
    report.solver_cost = plan_cost(plan, verdict, problem.objective);

    if (!native.proven_optimal || !answer.optimum_proven) {
      // Without two proofs only an impossible ordering is a disagreement.
      const bool contradiction = (native.proven_optimal && report.solver_cost < native.cost) ||
                                 (answer.optimum_proven && native.cost < report.solver_cost);
      report.status = contradiction ? CrossCheckStatus::Disagree : CrossCheckStatus::Agree;
      report.detail = "not both proven optimal";
      return report;
    }
    const bool agree = report.solver_cost == native.cost;
    report.status = agree ? CrossCheckStatus::Agree : CrossCheckStatus::Disagree;
    report.detail = "planner " + to_string(native.cost) + ", solver " + to_string(report.solver_cost);
  } catch (const std::exception& e) {
    report.status = CrossCheckStatus::Error;
    report.detail = e.what();
  }
  return report;
}

}  // namespace gossip
