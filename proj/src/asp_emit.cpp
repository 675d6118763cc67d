#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gossip/asp.hpp"

namespace gossip {

namespace {

std::string fluent(int agent, const InfoAtom& atom, const std::string& time) {
  return "kww(" + std::to_string(agent) + ",info(" + to_string(atom) + "," + std::to_string(atom.depth()) +
         ")," + time + ")";
}

class Emitter {
 public:
  explicit Emitter(const GossipProblem& p) : p_(p) {}

  std::string run() {
    domain();
    information();
    initial();
    goals();
    persistence_and_calls();
    permitted();
    concurrency();
    preferences();
    return out_.str();
  }

 private:
  std::string m() const { return std::to_string(p_.horizon); }

  void domain() {
    out_ << "agent(1.." << p_.agents << ").\n";
    out_ << "secret(1.." << p_.secrets << ").\n";
    if (p_.graph.is_complete()) {
      out_ << "connected(I,J) :- agent(I), agent(J), I!=J.\n";
    } else {
      for (auto [from, to] : p_.graph.edges()) {
        out_ << "connected(" << from.value() << "," << to.value() << ").\n";
      }
    }
    out_ << "\n";
  }

  void information() {
    out_ << "depth(0.." << p_.depth << ").\n";
    out_ << "info(K,0) :- secret(K).\n";
    if (p_.depth >= 1) out_ << "info(kw(I,K),1) :- agent(I), info(K,0).\n";
    if (p_.depth >= 2) out_ << "info(kw(I,kw(J,K)),D) :- agent(I;J), I!=J, info(kw(J,K),D-1), depth(D), D>1.\n";
    out_ << "time(0.." << m() << ").\n\n";
  }

  void initial() {
    out_ << "{kww(I,info(K,0),0)} :- agent(I), info(K,0).\n";
    if (p_.depth >= 1) out_ << "{kww(I,info(kw(J,K),D),0)} :- agent(I), I!=J, info(kw(J,K),D).\n";
    const auto* spec = std::get_if<ConstrainedInit>(&p_.initial);
    if (spec == nullptr || spec->canonical_base) {
      out_ << ":- not kww(I,info(I,0),0), agent(I), info(I,0).\n";
      out_ << ":- kww(I,info(K,0),0), agent(I), info(K,0), I!=K.\n";
    }
    if (spec == nullptr) {
      out_ << ":- kww(I,info(K,D),0), agent(I), info(K,D), D>0.\n\n";
      return;
    }
    // Deeper atoms are known initially only when required.
    bool deep_required = false;
    for (const auto& r : spec->required) {
      if (r.atom.depth() == 0) continue;
      if (r.atom.outer_agent() == r.agent) {
        throw GossipError("init require " + std::to_string(r.agent.value()) + " knows " + to_string(r.atom) +
                          ": the encoding cannot give an agent an initial kw about itself");
      }
      out_ << "init_req(" << r.agent.value() << "," << to_string(r.atom) << ").\n";
      deep_required = true;
    }
    out_ << ":- kww(I,info(K,D),0), agent(I), info(K,D), D>0"
         << (deep_required ? ", not init_req(I,K)" : "") << ".\n";
    for (const auto& r : spec->required) out_ << ":- not " << fluent(r.agent.value(), r.atom, "0") << ".\n";
    for (const auto& f : spec->forbidden) out_ << ":- " << fluent(f.agent.value(), f.atom, "0") << ".\n";
    if (spec->secret_bounds) {
      out_ << ":- not " << spec->secret_bounds->first << " {kww(I,info(K,0),0) : info(K,0)}, agent(I).\n";
      out_ << ":- {kww(I,info(K,0),0) : info(K,0)} " << spec->secret_bounds->second << ", agent(I).\n";
    }
    if (spec->unique) out_ << ":- 2 {kww(I,info(K,_),0): agent(I)}, info(K,_).\n";
    out_ << "\n";
  }

  // Body conditions every agent must meet at T beyond its own literals.
  std::string full_depth_condition() const {
    if (!p_.goal.full_depth) return "";
    const int bound = p_.goal.full_depth->max_depth.value_or(p_.depth);
    if (bound == 0) return std::to_string(p_.secrets) + " {kww(I,info(K,0),T): info(K,0)}";
    return std::to_string(count_atoms(p_.agents, p_.secrets, bound)) +
           " {kww(I,info(K,D),T): info(K,D), D<=" + std::to_string(bound) + "}";
  }

  bool all_secrets_literals(const std::vector<GoalLiteral>& literals) const {
    if (static_cast<int>(literals.size()) != p_.secrets) return false;
    std::vector<char> seen(static_cast<std::size_t>(p_.secrets) + 1, 0);
    for (const auto& l : literals) {
      if (!l.positive || l.atom.depth() != 0) return false;
      seen[static_cast<std::size_t>(l.atom.base_secret().value())] = 1;
    }
    return std::count(seen.begin() + 1, seen.end(), 1) == p_.secrets;
  }

  void count_goal(const std::string& head) {
    const auto& count = *p_.goal.count;
    out_ << head << " :-\n";
    out_ << "  N {kww(I,info(K,0),T): agent(I), info(K,0) ;\n";
    out_ << "     kww(I,info(K,D),T): agent(I), info(K,D), depth(D), D>0},\n";
    out_ << "  infoNo(N), time(T).\n";
    const std::string n = std::to_string(p_.agents);
    const std::string s = std::to_string(p_.secrets);
    const std::string d = std::to_string(p_.depth);
    switch (count.target) {
      case CountTarget::Constant:
        out_ << "infoNo(" << count.constant << ").\n";
        break;
      case CountTarget::Recursive:
        out_ << "infoNo(N) :- infoNoAux(N,_," << d << ").\n";
        out_ << "infoNoAux(" << s << "," << s << ",0).\n";
        out_ << "infoNoAux(" << n << "*N+N1," << n << "*N,D+1) :- infoNoAux(N1,N,D), depth(D), depth(D+1).\n";
        break;
      case CountTarget::Exact:
        out_ << "infoNo(N) :- infoNoAux(N,_," << d << ").\n";
        out_ << "infoNoAux(" << s << "," << s << ",0).\n";
        out_ << "infoNoAux(" << n << "*N+N1," << n << "*N,D+1) :- infoNoAux(N1,N,D), depth(D), depth(D+1), D=0.\n";
        out_ << "infoNoAux(" << p_.agents - 1 << "*N+N1," << p_.agents - 1
             << "*N,D+1) :- infoNoAux(N1,N,D), depth(D), depth(D+1), D>0.\n";
        break;
    }
  }

  void agent_goals(const std::string& head) {
    std::map<int, std::vector<GoalLiteral>> by_agent;
    for (const auto& l : p_.goal.literals) by_agent[l.agent.value()].push_back(l);
    const std::string full = full_depth_condition();
    const std::string secrets_body = std::to_string(p_.secrets) + " {kww(I,info(K,0),T): info(K,0)}";

    // Agents without literals share one rule; so do agents whose literals
    // just list every secret, printed in the cardinality form. Everyone
    // else gets a rule of their own.
    std::vector<int> listing_all, bare;
    for (int i = 1; i <= p_.agents; ++i) {
      auto it = by_agent.find(i);
      if (it == by_agent.end()) {
        bare.push_back(i);
      } else if (full.empty() && all_secrets_literals(it->second)) {
        listing_all.push_back(i);
      }
    }
    std::vector<int> group = bare;
    std::string group_body = full;
    if (bare.empty() && !listing_all.empty()) {
      group = listing_all;
      group_body = secrets_body;
    }
    std::vector<int> special;
    for (int i = 1; i <= p_.agents; ++i) {
      if (std::find(group.begin(), group.end(), i) == group.end()) special.push_back(i);
    }

    for (int agent : special) {
      const std::string a = std::to_string(agent);
      out_ << "goal(" << a << ",T) :- ";
      bool first = true;
      for (const auto& l : by_agent[agent]) {
        if (!first) out_ << ",\n  ";
        first = false;
        out_ << (l.positive ? "" : "not ") << fluent(agent, l.atom, "T") << ", info(" << to_string(l.atom) << ","
             << l.atom.depth() << ")";
      }
      if (!full.empty()) {
        std::string body = full;
        for (std::size_t pos; (pos = body.find("(I,")) != std::string::npos;) body.replace(pos, 3, "(" + a + ",");
        out_ << (first ? "" : ",\n  ") << body;
      }
      out_ << ", time(T).\n";
    }
    if (!group.empty()) {
      out_ << "goal(I,T) :- agent(I)";
      for (int agent : special) out_ << ", I!=" << agent;
      if (!group_body.empty()) out_ << ",\n  " << group_body;
      out_ << ", time(T).\n";
    }
    out_ << head << " :- " << p_.agents << " {goal(I,T): agent(I)}, time(T).\n";
  }

  void goals() {
    const auto& goal = p_.goal;
    const bool per_agent = !goal.literals.empty() || goal.full_depth.has_value();
    if (goal.count && per_agent) {
      count_goal("goal_count(T)");
      agent_goals("goal_agents(T)");
      out_ << "goal(T) :- goal_count(T), goal_agents(T).\n";
    } else if (goal.count) {
      count_goal("goal(T)");
    } else if (per_agent) {
      agent_goals("goal(T)");
    } else {
      out_ << "goal(T) :- time(T).\n";
    }
    if (goal.strict_negative) {
      for (const auto& l : goal.literals) {
        if (!l.positive) out_ << ":- " << fluent(l.agent.value(), l.atom, "T") << ", time(T).\n";
      }
    }
    out_ << "goal :- goal(T).\n";
    out_ << ":- not goal.\n\n";
  }

  void persistence_and_calls() {
    const std::string lt = "T<" + m();
    out_ << "kww(I,info(K,D),T+1) :- kww(I,info(K,D),T), agent(I), info(K,D), time(T), " << lt << ".\n\n";
    out_ << "{call(I,J,T)} :- agent(I), agent(J), time(T), I!=J, connected(I,J), " << lt << ".\n\n";
    out_ << "kww(J,info(K,D),T+1) :- call(I,J,T), agent(I), agent(J),\n";
    out_ << "  kww(I,info(K,D),T), info(K,D), permitted(I,J,K,T), time(T), " << lt << ".\n";
    out_ << "kww(J,info(kw(I,K),D+1),T+1) :- call(I,J,T), agent(I), agent(J), info(K,D),\n";
    out_ << "  kww(I,info(K,D),T), info(kw(I,K),D+1), permitted(I,J,K,T), time(T), " << lt << ".\n";
    out_ << "kww(I,info(K,D),T+1) :- call(I,J,T), agent(I), agent(J),\n";
    out_ << "  kww(J,info(K,D),T), info(K,D), permitted(J,I,K,T), time(T), " << lt << ".\n";
    out_ << "kww(I,info(kw(J,K),D+1),T+1) :- call(I,J,T), agent(I), agent(J), info(K,D),\n";
    out_ << "  kww(J,info(K,D),T), info(kw(J,K),D+1), permitted(J,I,K,T), time(T), " << lt << ".\n\n";
  }

  void permitted() {
    const std::string lt = "T<" + m();
    if (const auto* bounded = std::get_if<BoundedShare>(&p_.policy)) {
      out_ << bounded->min_atoms << " {permitted(I,J,K,T) : info(K,_), kww(I,info(K,_),T)} " << bounded->max_atoms
           << " :-\n";
      out_ << "  agent(I), agent(J), connected(I,J), time(T), " << lt << ".\n\n";
      return;
    }
    out_ << "permitted(I,J,K,T) :- connected(I,J), agent(I), agent(J), info(K,_),\n";
    out_ << "  kww(I,info(K,_),T), not -permitted(I,J,K,T), time(T), " << lt << ".\n";
    for (const auto& b : std::get<ShareAll>(p_.policy).blocked) {
      out_ << "-permitted(" << b.sender.value() << "," << b.receiver.value() << "," << to_string(b.atom) << ","
           << b.time << ").\n";
    }
    out_ << "\n";
  }

  void concurrency() {
    const std::string lt = "T<" + m();
    if (p_.mode == ConcurrencyMode::Parallel) {
      out_ << ":- 2 {call(I,J,T): agent(J), connected(I,J);\n";
      out_ << "  call(J1,I,T): agent(J1), connected(J1,I)}, agent(I), time(T), " << lt << ".\n\n";
    } else {
      out_ << ":- 2 {call(I,J,T): agent(I), agent(J), connected(I,J)}, time(T), " << lt << ".\n\n";
    }
  }

  void preferences() {
    const auto& o = p_.objective;
    const bool calls = o.objective == Objective::LexMakespanThenCalls || o.objective == Objective::MinCalls;
    const bool steps = o.objective == Objective::LexMakespanThenCalls || o.objective == Objective::MinMakespan;
    if (calls) {
      out_ << ":~ call(I,J,T), connected(I,J), agent(I;J), time(T), T<" << m() << ". [" << o.call_weight << "@"
           << o.call_priority << ",I,J,T]\n";
    }
    if (steps) out_ << ":~ not goal(T), time(T). [" << o.step_weight << "@" << o.step_priority << ",T]\n";
  }

  const GossipProblem& p_;
  std::ostringstream out_;
};

}  // namespace

std::string emit_asp(const GossipProblem& problem) {
  validate(problem);
  return Emitter(problem).run();
}

}  // namespace gossip
