#pragma once

#include <optional>

#include "gossip/problem.hpp"

namespace gossip {

class InstanceTooLarge : public GossipError {
 public:
  using GossipError::GossipError;
};

/// Simulates `plan` and collects every matching, connectivity, timing and
/// share-set problem as a violation instead of throwing. Offending calls
/// are left out of the trace.
Verdict verify(const Plan& plan, const GossipProblem& problem);

struct OracleLimits {
  int max_makespan = 5;
  int max_calls = 1 << 20;
  /// Refuse instances whose round-choice count raised to the makespan
  /// exceeds this.
  double ceiling = 5e7;
};

struct OracleOptimum {
  Cost cost;
  Plan plan;
};

/// Exhaustive search over every round sequence (empty rounds and, under a
/// bounded policy, every admissible share set included) with at most
/// min(limits.max_makespan, horizon) rounds. Throws InstanceTooLarge when
/// the guard trips.
std::optional<OracleOptimum> brute_force_optimal(const GossipProblem& problem, const OracleLimits& limits = {});

}  // namespace gossip
