#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace gossip {

/// Integer identifier that does not implicitly convert to or from other ids.
template <typename Tag>
class StrongId {
 public:
  constexpr StrongId() = default;
  constexpr explicit StrongId(int value) : value_(value) {}

  constexpr int value() const { return value_; }

  friend constexpr auto operator<=>(StrongId, StrongId) = default;

 private:
  int value_ = 0;
};

struct AgentTag {};
struct SecretTag {};

/// Agents are numbered 1..n.
using AgentId = StrongId<AgentTag>;
/// Secrets are numbered 1..s.
using SecretId = StrongId<SecretTag>;

class GossipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (atoms, plans, problem files, answer sets).
class ParseError : public GossipError {
 public:
  using GossipError::GossipError;
};

/// Structurally well-formed input that violates a model constraint.
class ValidationError : public GossipError {
 public:
  using GossipError::GossipError;
};

/// A round puts one agent into two calls (or two calls in sequential mode).
class MatchingViolation : public ValidationError {
 public:
  MatchingViolation(int time, AgentId agent, const std::string& what)
      : ValidationError(what), time_(time), agent_(agent) {}

  int time() const { return time_; }
  AgentId agent() const { return agent_; }

 private:
  int time_;
  AgentId agent_;
};

}  // namespace gossip

template <typename Tag>
struct std::hash<gossip::StrongId<Tag>> {
  std::size_t operator()(gossip::StrongId<Tag> id) const noexcept {
    return std::hash<int>{}(id.value());
  }
};
