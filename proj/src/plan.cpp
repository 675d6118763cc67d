#include "gossip/plan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

namespace gossip {

Plan Plan::from_calls(std::vector<Call> calls) {
  std::map<int, std::vector<Call>> by_time;
  for (auto& call : calls) by_time[call.time].push_back(std::move(call));
  Plan plan;
  for (auto& [time, group] : by_time) {
    std::stable_sort(group.begin(), group.end());
    plan.rounds_.push_back(Round{time, std::move(group)});
  }
  return plan;
}

std::size_t Plan::call_count() const {
  std::size_t total = 0;
  for (const auto& round : rounds_) total += round.calls.size();
  return total;
}

int Plan::horizon() const { return rounds_.empty() ? 0 : rounds_.back().step + 1; }

const Round* Plan::round_at(int step) const {
  auto it = std::lower_bound(rounds_.begin(), rounds_.end(), step,
                             [](const Round& r, int s) { return r.step < s; });
  if (it == rounds_.end() || it->step != step) return nullptr;
  return &*it;
}

std::vector<Call> Plan::calls() const {
  std::vector<Call> out;
  for (const auto& round : rounds_) out.insert(out.end(), round.calls.begin(), round.calls.end());
  return out;
}

namespace {

void render_shares(std::string& out, AgentId from, AgentId to,
                   const std::optional<std::vector<InfoAtom>>& shares) {
  if (!shares) return;
  out += " share " + std::to_string(from.value()) + "->" + std::to_string(to.value()) + ": {";
  for (std::size_t i = 0; i < shares->size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string((*shares)[i]);
  }
  out += '}';
}

class PlanScanner {
 public:
  explicit PlanScanner(std::string_view text) : text_(text) {}

  std::vector<Call> scan() {
    std::vector<Call> calls;
    while (true) {
      skip_blank();
      if (at_end()) break;
      if (peek_word("call(")) {
        calls.push_back(call());
      } else if (peek_word("share")) {
        if (calls.empty()) fail("share clause before any call");
        share_clause(calls.back());
      } else {
        fail("unexpected token");
      }
    }
    return calls;
  }

 private:
  Call call() {
    const std::size_t start = pos_;
    pos_ += 5;
    const int caller = number(start);
    expect(',', start);
    const int callee = number(start);
    expect(',', start);
    const int time = number(start);
    expect(')', start);
    return make_call(caller, callee, time);
  }

  void share_clause(Call& call) {
    const std::size_t start = pos_;
    pos_ += 5;
    skip_spaces();
    const int from = number(start);
    skip_spaces();
    if (text_.compare(pos_, 2, "->") != 0) fail_at(start, "expected '->'");
    pos_ += 2;
    skip_spaces();
    const int to = number(start);
    skip_spaces();
    expect(':', start);
    skip_spaces();
    expect('{', start);
    std::vector<InfoAtom> atoms;
    std::string current;
    int nesting = 0;
    while (true) {
      if (at_end()) fail_at(start, "unterminated share set");
      const char c = text_[pos_++];
      if (c == '(') ++nesting;
      if (c == ')') --nesting;
      if ((c == ',' && nesting == 0) || (c == '}' && nesting == 0)) {
        if (!trim(current).empty()) atoms.push_back(parse_atom(current));
        else if (c == ',') fail_at(start, "empty atom in share set");
        current.clear();
        if (c == '}') break;
        continue;
      }
      current.push_back(c);
    }
    if (from == call.caller.value() && to == call.callee.value()) {
      call.caller_shares = std::move(atoms);
    } else if (from == call.callee.value() && to == call.caller.value()) {
      call.callee_shares = std::move(atoms);
    } else {
      fail_at(start, "share direction does not match the call");
    }
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  int number(std::size_t token_start) {
    skip_spaces();
    int value = 0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc{} || ptr == begin) fail_at(token_start, "expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    skip_spaces();
    return value;
  }

  void expect(char c, std::size_t token_start) {
    skip_spaces();
    if (at_end() || text_[pos_] != c) fail_at(token_start, std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek_word(std::string_view word) const { return text_.compare(pos_, word.size(), word) == 0; }
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_spaces() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#' || c == '%') {
        while (!at_end() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& why) const { fail_at(pos_, why); }

  [[noreturn]] void fail_at(std::size_t start, const std::string& why) const {
    std::size_t end = start;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end]))) ++end;
    throw ParseError("malformed plan token '" + std::string(text_.substr(start, end - start)) +
                     "': " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render_call(const Call& call) {
  std::string out = "call(" + std::to_string(call.caller.value()) + "," +
                    std::to_string(call.callee.value()) + "," + std::to_string(call.time) + ")";
  render_shares(out, call.caller, call.callee, call.caller_shares);
  render_shares(out, call.callee, call.caller, call.callee_shares);
  return out;
}

std::string render_plan(const Plan& plan) {
  std::string out;
  for (const auto& call : plan.calls()) {
    out += render_call(call);
    out += '\n';
  }
  return out;
}

Plan parse_plan(std::string_view text) { return Plan::from_calls(PlanScanner(text).scan()); }

}  // namespace gossip
