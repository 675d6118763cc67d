#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gossip/problem.hpp"

namespace gossip {

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  for (std::string word; in >> word;) words.push_back(word);
  return words;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class ProblemReader {
 public:
  GossipProblem read(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto words = split_words(line);
      if (words.empty()) continue;
      directive(words, line);
    }
    return finish();
  }

 private:
  void directive(const std::vector<std::string>& w, const std::string& line) {
    const std::string key = lower(w[0]);
    if (key == "agents") {
      arity(w, 2);
      agents_ = integer(w[1]);
    } else if (key == "secrets") {
      arity(w, 2);
      secrets_ = integer(w[1]);
    } else if (key == "depth") {
      arity(w, 2);
      depth_ = integer(w[1]);
    } else if (key == "horizon") {
      arity(w, 2);
      horizon_ = integer(w[1]);
    } else if (key == "mode") {
      arity(w, 2);
      const auto mode = lower(w[1]);
      if (mode == "parallel") problem_.mode = ConcurrencyMode::Parallel;
      else if (mode == "sequential") problem_.mode = ConcurrencyMode::Sequential;
      else fail("mode must be parallel or sequential");
    } else if (key == "edge") {
      arity(w, 3);
      edges_.emplace_back(integer(w[1]), integer(w[2]));
    } else if (key == "edges") {
      // Without any edge lines the graph is complete; this says otherwise.
      arity(w, 2);
      if (lower(w[1]) != "none") fail("expected 'edges none'");
      no_edges_ = true;
    } else if (key == "init") {
      init(w, line);
    } else if (key == "goal") {
      goal(w, line);
    } else if (key == "share") {
      share(w, line);
    } else if (key == "objective") {
      arity(w, 2);
      const auto o = lower(w[1]);
      if (o == "lex") problem_.objective.objective = Objective::LexMakespanThenCalls;
      else if (o == "calls") problem_.objective.objective = Objective::MinCalls;
      else if (o == "makespan") problem_.objective.objective = Objective::MinMakespan;
      else if (o == "none") problem_.objective.objective = Objective::Satisficing;
      else fail("objective must be lex, calls, makespan or none");
    } else {
      fail("unknown directive '" + w[0] + "'");
    }
  }

  void init(const std::vector<std::string>& w, const std::string& line) {
    if (w.size() < 2) fail("init needs an argument");
    const auto kind = lower(w[1]);
    if (kind == "canonical") {
      arity(w, 2);
      canonical_ = true;
    } else if (kind == "require" || kind == "forbid") {
      AgentAtom pair = agent_atom(w, line);
      (kind == "require" ? constrained_.required : constrained_.forbidden).push_back(pair);
      constrained_used_ = true;
    } else if (kind == "bounds") {
      arity(w, 4);
      constrained_.secret_bounds = std::make_pair(integer(w[2]), integer(w[3]));
      constrained_used_ = true;
    } else if (kind == "unique") {
      arity(w, 2);
      constrained_.unique = true;
      constrained_used_ = true;
    } else {
      fail("unknown init form '" + w[1] + "'");
    }
  }

  // init require A [knows] ATOM; the atom may contain spaces.
  AgentAtom agent_atom(const std::vector<std::string>& w, const std::string& line) {
    if (w.size() < 4) fail("expected: init " + w[1] + " AGENT knows ATOM");
    const int agent = integer(w[2]);
    std::size_t first = 3;
    if (lower(w[3]) == "knows") first = 4;
    if (first >= w.size()) fail("missing atom");
    return AgentAtom{AgentId{agent}, atom_from(w, first, line)};
  }

  void goal(const std::vector<std::string>& w, const std::string& line) {
    if (w.size() < 2) fail("goal needs an argument");
    const auto kind = lower(w[1]);
    goal_given_ = true;
    if (kind == "full-depth") {
      FullDepth full;
      if (w.size() == 3) full.max_depth = integer(w[2]);
      else arity(w, 2);
      problem_.goal.full_depth = full;
    } else if (kind == "count") {
      arity(w, 3);
      const auto target = lower(w[2]);
      GlobalCount count;
      if (target == "recursive") count.target = CountTarget::Recursive;
      else if (target == "exact") count.target = CountTarget::Exact;
      else {
        count.target = CountTarget::Constant;
        count.constant = integer(w[2]);
      }
      problem_.goal.count = count;
    } else if (kind == "agent") {
      if (w.size() < 5 || (w[3] != "+" && w[3] != "-")) fail("expected: goal agent A +|- ATOM");
      problem_.goal.literals.push_back(
          GoalLiteral{AgentId{integer(w[2])}, atom_from(w, 4, line), w[3] == "+"});
    } else if (kind == "strict") {
      arity(w, 2);
      problem_.goal.strict_negative = true;
    } else {
      fail("unknown goal form '" + w[1] + "'");
    }
  }

  void share(const std::vector<std::string>& w, const std::string& line) {
    if (w.size() < 2) fail("share needs an argument");
    const auto kind = lower(w[1]);
    if (kind == "all") {
      arity(w, 2);
      if (!std::holds_alternative<ShareAll>(problem_.policy)) problem_.policy = ShareAll{};
    } else if (kind == "bounds") {
      arity(w, 4);
      problem_.policy = BoundedShare{integer(w[2]), integer(w[3])};
    } else if (kind == "block") {
      // share block SENDER RECEIVER TIME ATOM
      if (w.size() < 6) fail("expected: share block SENDER RECEIVER TIME ATOM");
      blocked_.push_back(BlockedShare{AgentId{integer(w[2])}, AgentId{integer(w[3])},
                                      atom_from(w, 5, line), integer(w[4])});
    } else {
      fail("unknown share form '" + w[1] + "'");
    }
  }

  InfoAtom atom_from(const std::vector<std::string>& w, std::size_t first, const std::string&) {
    std::string text;
    for (std::size_t i = first; i < w.size(); ++i) text += w[i];
    try {
      return parse_atom(text);
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

  GossipProblem finish() {
    if (agents_ < 1) throw ParseError("problem file needs 'agents N' with N >= 1");
    problem_.agents = agents_;
    problem_.secrets = secrets_.value_or(agents_);
    problem_.depth = depth_;
    problem_.horizon = horizon_;
    if (no_edges_ && !edges_.empty()) throw ParseError("'edges none' together with edge lines");
    if (edges_.empty() && !no_edges_) {
      problem_.graph = ConnectivityGraph::complete(agents_);
    } else {
      problem_.graph = ConnectivityGraph(agents_);
      for (auto [from, to] : edges_) problem_.graph.add_edge(AgentId{from}, AgentId{to});
    }
    if (constrained_used_) {
      constrained_.canonical_base = canonical_;
      problem_.initial = constrained_;
    } else {
      problem_.initial = CanonicalInit{};
    }
    if (!goal_given_) problem_.goal.full_depth = FullDepth{};
    if (!blocked_.empty()) {
      auto* all = std::get_if<ShareAll>(&problem_.policy);
      if (all == nullptr) throw ParseError("share block needs the share-all policy");
      all->blocked.insert(blocked_.begin(), blocked_.end());
    }
    validate(problem_);
    return problem_;
  }

  int integer(const std::string& word) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size()) fail("expected an integer, got '" + word + "'");
    return value;
  }

  void arity(const std::vector<std::string>& w, std::size_t expected) {
    if (w.size() != expected) fail("'" + w[0] + "' takes " + std::to_string(expected - 1) + " argument(s)");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("line " + std::to_string(line_no_) + ": " + why);
  }

  GossipProblem problem_;
  int agents_ = 0;
  std::optional<int> secrets_;
  int depth_ = 0;
  int horizon_ = 0;
  std::vector<std::pair<int, int>> edges_;
  bool no_edges_ = false;
  bool canonical_ = false;
  bool constrained_used_ = false;
  bool goal_given_ = false;
  ConstrainedInit constrained_;
  std::vector<BlockedShare> blocked_;
  int line_no_ = 0;
};

}  // namespace

GossipProblem parse_problem(std::string_view text) { return ProblemReader().read(text); }

GossipProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string render_problem(const GossipProblem& p) {
  std::ostringstream out;
  out << "agents " << p.agents << "\nsecrets " << p.secrets << "\ndepth " << p.depth
      << "\nhorizon " << p.horizon << "\nmode "
      << (p.mode == ConcurrencyMode::Parallel ? "parallel" : "sequential") << "\n";
  if (!p.graph.is_complete()) {
    if (p.graph.edges().empty()) out << "edges none\n";
    for (auto [from, to] : p.graph.edges()) out << "edge " << from.value() << " " << to.value() << "\n";
  }
  if (std::holds_alternative<CanonicalInit>(p.initial)) {
    out << "init canonical\n";
  } else {
    const auto& c = std::get<ConstrainedInit>(p.initial);
    if (c.canonical_base) out << "init canonical\n";
    for (const auto& r : c.required) out << "init require " << r.agent.value() << " knows " << to_string(r.atom) << "\n";
    for (const auto& f : c.forbidden) out << "init forbid " << f.agent.value() << " knows " << to_string(f.atom) << "\n";
    if (c.secret_bounds) out << "init bounds " << c.secret_bounds->first << " " << c.secret_bounds->second << "\n";
    if (c.unique) out << "init unique\n";
  }
  if (p.goal.full_depth) {
    out << "goal full-depth";
    if (p.goal.full_depth->max_depth) out << " " << *p.goal.full_depth->max_depth;
    out << "\n";
  }
  if (p.goal.count) {
    out << "goal count ";
    switch (p.goal.count->target) {
      case CountTarget::Recursive: out << "recursive"; break;
      case CountTarget::Exact: out << "exact"; break;
      case CountTarget::Constant: out << p.goal.count->constant; break;
    }
    out << "\n";
  }
  for (const auto& l : p.goal.literals) {
    out << "goal agent " << l.agent.value() << (l.positive ? " + " : " - ") << to_string(l.atom) << "\n";
  }
  if (p.goal.strict_negative) out << "goal strict\n";
  if (const auto* bounded = std::get_if<BoundedShare>(&p.policy)) {
    out << "share bounds " << bounded->min_atoms << " " << bounded->max_atoms << "\n";
  } else {
    out << "share all\n";
    for (const auto& b : std::get<ShareAll>(p.policy).blocked) {
      out << "share block " << b.sender.value() << " " << b.receiver.value() << " " << b.time << " "
          << to_string(b.atom) << "\n";
    }
  }
  switch (p.objective.objective) {
    case Objective::LexMakespanThenCalls: out << "objective lex\n"; break;
    case Objective::MinCalls: out << "objective calls\n"; break;
    case Objective::MinMakespan: out << "objective makespan\n"; break;
    case Objective::Satisficing: out << "objective none\n"; break;
  }
  return out.str();
}

}  // namespace gossip
