#include "gossip/atom.hpp"

#include <cctype>
#include <charconv>

namespace gossip {

InfoAtom InfoAtom::secret(SecretId secret) {
  InfoAtom atom;
  atom.secret_ = secret;
  return atom;
}

InfoAtom InfoAtom::knows_whether(AgentId agent, const InfoAtom& inner) {
  InfoAtom atom;
  atom.secret_ = inner.secret_;
  atom.chain_.reserve(inner.chain_.size() + 1);
  atom.chain_.push_back(agent);
  atom.chain_.insert(atom.chain_.end(), inner.chain_.begin(), inner.chain_.end());
  return atom;
}

std::optional<AgentId> InfoAtom::outer_agent() const {
  if (chain_.empty()) return std::nullopt;
  return chain_.front();
}

InfoAtom InfoAtom::inner() const {
  if (chain_.empty()) throw std::logic_error("inner() of a bare secret");
  InfoAtom atom;
  atom.secret_ = secret_;
  atom.chain_.assign(chain_.begin() + 1, chain_.end());
  return atom;
}

std::strong_ordering operator<=>(const InfoAtom& a, const InfoAtom& b) {
  if (auto c = a.chain_.size() <=> b.chain_.size(); c != 0) return c;
  if (auto c = a.chain_ <=> b.chain_; c != 0) return c;
  return a.secret_ <=> b.secret_;
}

bool is_well_formed(const InfoAtom& atom, int agents, int secrets, int max_depth) {
  const int k = atom.base_secret().value();
  if (k < 1 || k > secrets) return false;
  if (atom.depth() > max_depth) return false;
  const auto& chain = atom.agent_chain();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i].value() < 1 || chain[i].value() > agents) return false;
    if (i > 0 && chain[i] == chain[i - 1]) return false;
  }
  return true;
}

std::string to_string(const InfoAtom& atom) {
  std::string out;
  for (AgentId agent : atom.agent_chain()) {
    out += "kw(";
    out += std::to_string(agent.value());
    out += ',';
  }
  out += std::to_string(atom.base_secret().value());
  out.append(atom.agent_chain().size(), ')');
  return out;
}

namespace {

class AtomParser {
 public:
  explicit AtomParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
    }
  }

  InfoAtom parse() {
    InfoAtom atom = term();
    if (pos_ != text_.size()) fail("trailing characters");
    return atom;
  }

 private:
  InfoAtom term() {
    if (text_.compare(pos_, 3, "kw(") == 0) {
      pos_ += 3;
      const int agent = number();
      expect(',');
      InfoAtom inner = term();
      expect(')');
      return InfoAtom::knows_whether(AgentId{agent}, inner);
    }
    return InfoAtom::secret(SecretId{number()});
  }

  int number() {
    int value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("bad atom '" + text_ + "': " + why + " at offset " + std::to_string(pos_));
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

InfoAtom parse_atom(std::string_view text) { return AtomParser(text).parse(); }

}  // namespace gossip
