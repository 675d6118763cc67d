#include "gossip/semantics.hpp"

#include <algorithm>
#include <string>

namespace gossip {

namespace {

std::string describe(const Call& call) { return render_call(call); }

}  // namespace

CallSemantics::CallSemantics(const InfoUniverse& universe, const ConnectivityGraph& graph,
                             const SharePolicy& policy, ConcurrencyMode mode)
    : universe_(universe), graph_(graph), policy_(policy), mode_(mode) {
  if (graph.agent_count() != universe.agent_count()) {
    throw ValidationError("graph and universe disagree on the agent count");
  }
}

bool CallSemantics::permitted(const KnowledgeState& state, AgentId sender, AgentId receiver,
                              std::size_t atom, int time,
                              const std::optional<std::vector<InfoAtom>>& selection) const {
  if (!graph_.connected(sender, receiver)) return false;
  if (!state.knows(sender, atom)) return false;
  if (const auto* all = std::get_if<ShareAll>(&policy_)) {
    if (all->blocked.empty()) return true;
    return !all->blocked.contains(BlockedShare{sender, receiver, universe_.atom(atom), time});
  }
  if (!selection) {
    throw ValidationError("bounded share policy needs an explicit share set for " +
                          std::to_string(sender.value()) + "->" + std::to_string(receiver.value()) +
                          " at time " + std::to_string(time));
  }
  const InfoAtom& wanted = universe_.atom(atom);
  return std::find(selection->begin(), selection->end(), wanted) != selection->end();
}

void CallSemantics::check_call(const Call& call) const {
  const int n = universe_.agent_count();
  for (AgentId agent : {call.caller, call.callee}) {
    if (agent.value() < 1 || agent.value() > n) {
      throw ValidationError(describe(call) + " names unknown agent " +
                            std::to_string(agent.value()));
    }
  }
  if (call.caller == call.callee) throw ValidationError(describe(call) + " is a self-call");
  if (call.time < 0) throw ValidationError(describe(call) + " has a negative time");
  if (!graph_.connected(call.caller, call.callee)) {
    throw ValidationError(describe(call) + " uses missing edge " +
                          std::to_string(call.caller.value()) + "->" +
                          std::to_string(call.callee.value()) + " at time " +
                          std::to_string(call.time));
  }
}

std::vector<std::size_t> CallSemantics::bounded_selection(const KnowledgeState& pre,
                                                          const Call& call,
                                                          AgentId sender) const {
  const auto& bounded = std::get<BoundedShare>(policy_);
  const auto& shares = call.shares_from(sender);
  const AgentId receiver = sender == call.caller ? call.callee : call.caller;
  const std::string where = std::to_string(sender.value()) + "->" +
                            std::to_string(receiver.value()) + " in " + describe(call);
  if (!shares) throw ValidationError("missing share set for " + where);

  std::vector<std::size_t> indices;
  for (const auto& atom : *shares) {
    const std::size_t index = universe_.require_index(atom);
    if (!pre.knows(sender, index)) {
      throw ValidationError("share set for " + where + " contains " + to_string(atom) +
                            ", which the sender does not know");
    }
    if (std::find(indices.begin(), indices.end(), index) != indices.end()) {
      throw ValidationError("share set for " + where + " repeats " + to_string(atom));
    }
    indices.push_back(index);
  }
  const auto known = static_cast<int>(pre.known_count(sender));
  const int low = std::min(bounded.min_atoms, known);
  const int high = std::min(bounded.max_atoms, known);
  const auto size = static_cast<int>(indices.size());
  if (size < low || size > high) {
    throw ValidationError("share set for " + where + " has " + std::to_string(size) +
                          " atoms, allowed " + std::to_string(low) + ".." + std::to_string(high));
  }
  return indices;
}

void CallSemantics::apply_direction(const KnowledgeState& pre, const Call& call, AgentId sender,
                                    AgentId receiver, KnowledgeState& out) const {
  if (!graph_.connected(sender, receiver)) {
    const auto& shares = call.shares_from(sender);
    if (shares && !shares->empty()) {
      throw ValidationError("share set given for " + std::to_string(sender.value()) + "->" +
                            std::to_string(receiver.value()) + " without that edge in " +
                            describe(call));
    }
    return;
  }

  auto pass = [&](std::size_t atom) {
    out.learn(receiver, atom);
    const std::size_t wrapped = universe_.wrap(sender, atom);
    if (wrapped != kNoAtom) out.learn(receiver, wrapped);
  };

  if (const auto* all = std::get_if<ShareAll>(&policy_)) {
    for (std::size_t atom : pre.known_atoms(sender)) {
      if (!all->blocked.empty() &&
          all->blocked.contains(BlockedShare{sender, receiver, universe_.atom(atom), call.time})) {
        continue;
      }
      pass(atom);
    }
    return;
  }
  for (std::size_t atom : bounded_selection(pre, call, sender)) pass(atom);
}

KnowledgeState CallSemantics::apply_call(const KnowledgeState& state, const Call& call) const {
  check_call(call);
  if (std::holds_alternative<ShareAll>(policy_) && (call.caller_shares || call.callee_shares)) {
    throw ValidationError(describe(call) + " carries share sets under the share-all policy");
  }
  KnowledgeState out = state;
  apply_direction(state, call, call.caller, call.callee, out);
  apply_direction(state, call, call.callee, call.caller, out);
  return out;
}

void CallSemantics::check_round(const Round& round) const {
  if (mode_ == ConcurrencyMode::Sequential && round.calls.size() > 1) {
    throw MatchingViolation(round.step, round.calls[1].caller,
                            "sequential mode allows one call per step, got " +
                                std::to_string(round.calls.size()) + " at time " +
                                std::to_string(round.step));
  }
  std::vector<int> seen(static_cast<std::size_t>(universe_.agent_count()) + 1, 0);
  for (const auto& call : round.calls) {
    if (call.time != round.step) {
      throw ValidationError(describe(call) + " filed under time " + std::to_string(round.step));
    }
    check_call(call);
    for (AgentId agent : {call.caller, call.callee}) {
      if (seen[static_cast<std::size_t>(agent.value())]++ > 0) {
        throw MatchingViolation(round.step, agent,
                                "agent " + std::to_string(agent.value()) +
                                    " is in two calls at time " + std::to_string(round.step));
      }
    }
  }
}

KnowledgeState CallSemantics::apply_round(const KnowledgeState& state, const Round& round) const {
  check_round(round);
  KnowledgeState out = state;
  for (const auto& call : round.calls) {
    if (std::holds_alternative<ShareAll>(policy_) && (call.caller_shares || call.callee_shares)) {
      throw ValidationError(describe(call) + " carries share sets under the share-all policy");
    }
    apply_direction(state, call, call.caller, call.callee, out);
    apply_direction(state, call, call.callee, call.caller, out);
  }
  return out;
}

Trace CallSemantics::simulate(const KnowledgeState& initial, const Plan& plan, int horizon) const {
  const int length = std::max(horizon, plan.horizon());
  Trace trace;
  trace.states.reserve(static_cast<std::size_t>(length) + 1);
  trace.states.push_back(initial);
  for (int t = 0; t < length; ++t) {
    const Round* round = plan.round_at(t);
    if (round == nullptr) {
      trace.states.push_back(trace.states.back());
    } else {
      trace.states.push_back(apply_round(trace.states.back(), *round));
    }
  }
  return trace;
}

}  // namespace gossip
