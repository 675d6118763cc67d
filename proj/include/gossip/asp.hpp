#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/planner.hpp"

namespace gossip {

/// ASP-Core-2 program for the problem, with every constant substituted.
/// Throws GossipError for conditions the encoding cannot express.
std::string emit_asp(const GossipProblem& problem);

struct AnswerSet {
  Plan plan;
  /// Values of the last "Optimization:" line, highest priority first.
  std::vector<std::int64_t> optimization;
  bool satisfiable = true;
  bool optimum_proven = false;
};

/// Reads solver output or a bare list of atoms. With several "Answer:"
/// blocks the last one wins. Throws ParseError naming a malformed call
/// atom.
AnswerSet parse_answer_set(std::string_view text);

struct SolverHandle {
  std::string executable;
  std::vector<std::string> arguments;
};

/// The solver named by GOSSIP_ASP_SOLVER, if set.
std::optional<SolverHandle> solver_from_environment();

enum class CrossCheckStatus { Skipped, Agree, Disagree, Error };

const char* to_string(CrossCheckStatus status);

struct CrossCheckReport {
  CrossCheckStatus status = CrossCheckStatus::Skipped;
  std::string detail;
  Cost native_cost = Cost::infinite();
  Cost solver_cost = Cost::infinite();
  std::optional<Plan> solver_plan;
};

/// Solves natively and through the external solver, verifies the
/// solver's plan, and compares the two costs. Never throws for solver
/// trouble; that becomes an Error report.
CrossCheckReport cross_check(const GossipProblem& problem, const std::optional<SolverHandle>& solver,
                             const SolveOptions& options = {});

}  // namespace gossip
