#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gossip/semantics.hpp"

namespace gossip {

/// Lexicographically compared cost levels; an infinite cost (goal never
/// reached) is worse than every finite one.
class Cost {
 public:
  static Cost infinite() { return Cost(); }
  static Cost of(std::vector<std::int64_t> levels) {
    Cost cost;
    cost.finite_ = true;
    cost.levels_ = std::move(levels);
    return cost;
  }

  bool finite() const { return finite_; }
  const std::vector<std::int64_t>& levels() const { return levels_; }

  friend std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
    if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.levels_ <=> b.levels_;
  }
  friend bool operator==(const Cost&, const Cost&) = default;

 private:
  bool finite_ = false;
  std::vector<std::int64_t> levels_;
};

std::string to_string(const Cost& cost);

/// Weak-constraint totals, highest priority first.
struct WeightedCost {
  std::int64_t priority2 = 0;
  std::int64_t priority1 = 0;

  friend auto operator<=>(const WeightedCost&, const WeightedCost&) = default;
};

struct Violation {
  int time = 0;
  std::string description;
};

/// Result of simulating a plan against a problem.
struct Verdict {
  Trace trace;
  std::optional<int> goal_time;
  std::size_t call_count = 0;
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool solved() const { return valid() && goal_time.has_value(); }
};

}  // namespace gossip
