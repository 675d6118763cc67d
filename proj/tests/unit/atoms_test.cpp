#include <doctest.h>

#include <functional>
#include <set>

#include "gossip/universe.hpp"

using namespace gossip;

namespace {

InfoAtom s(int k) { return InfoAtom::secret(SecretId{k}); }
InfoAtom kw(int i, const InfoAtom& inner) { return InfoAtom::knows_whether(AgentId{i}, inner); }

// Straight from the recursive definition, with no shared code.
std::set<InfoAtom> generate(int n, int secrets, int d) {
  std::set<InfoAtom> out;
  std::vector<InfoAtom> layer;
  for (int k = 1; k <= secrets; ++k) layer.push_back(s(k));
  out.insert(layer.begin(), layer.end());
  for (int depth = 1; depth <= d; ++depth) {
    std::vector<InfoAtom> next;
    for (const auto& inner : layer) {
      for (int i = 1; i <= n; ++i) {
        if (depth > 1 && inner.outer_agent()->value() == i) continue;
        next.push_back(kw(i, inner));
      }
    }
    out.insert(next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("depth counts kw wrappers") {
  CHECK(depth(s(3)) == 0);
  CHECK(depth(kw(1, s(2))) == 1);
  CHECK(depth(kw(2, kw(1, s(1)))) == 2);
}

TEST_CASE("well-formedness") {
  CHECK_FALSE(is_well_formed(kw(1, kw(1, s(2))), 3, 3, 2));
  CHECK(is_well_formed(kw(1, s(1)), 3, 3, 1));
  CHECK_FALSE(is_well_formed(kw(3, kw(1, s(2))), 3, 3, 1));
  CHECK_FALSE(is_well_formed(s(4), 3, 3, 0));
  CHECK_FALSE(is_well_formed(kw(4, s(1)), 3, 3, 1));
}

TEST_CASE("small universes by hand") {
  const auto a = enumerate_atoms(1, 2, 0);
  REQUIRE(a.size() == 2);
  CHECK(a.atom(0) == s(1));
  CHECK(a.atom(1) == s(2));

  const auto b = enumerate_atoms(2, 1, 1);
  REQUIRE(b.size() == 3);
  CHECK(b.atom(0) == s(1));
  CHECK(b.atom(1) == kw(1, s(1)));
  CHECK(b.atom(2) == kw(2, s(1)));

  CHECK(enumerate_atoms(4, 4, 1).size() == 20);
  CHECK_THROWS_AS(enumerate_atoms(2, 2, -1), ValidationError);
}

TEST_CASE("count_atoms examples") {
  CHECK(count_atoms(2, 2, 0) == 2);
  CHECK(count_atoms(4, 4, 1) == 20);
  CHECK(count_atoms(4, 4, 2) == 68);
}

TEST_CASE("recursive count examples") {
  CHECK(count_atoms_recursive(4, 4, 0) == 4);
  CHECK(count_atoms_recursive(4, 4, 1) == 20);
  CHECK(count_atoms_recursive(4, 4, 2) == 84);
  // 16 introspective depth-2 terms kw(i,kw(i,k)) make up the gap.
  CHECK(count_atoms_recursive(4, 4, 2) - count_atoms(4, 4, 2) == 16);
}

TEST_CASE("universe matches independent generation for n, s <= 5, d <= 3") {
  for (int n = 1; n <= 5; ++n) {
    for (int secrets = 1; secrets <= 5; ++secrets) {
      for (int d = 0; d <= 3; ++d) {
        CAPTURE(n);
        CAPTURE(secrets);
        CAPTURE(d);
        const auto universe = enumerate_atoms(n, secrets, d);
        const auto expected = generate(n, secrets, d);
        REQUIRE(universe.size() == static_cast<std::size_t>(count_atoms(n, secrets, d)));
        REQUIRE(universe.size() == expected.size());
        for (const auto& atom : universe.atoms()) {
          CHECK(is_well_formed(atom, n, secrets, d));
          CHECK(expected.count(atom) == 1);
        }
        if (d <= 1) {
          CHECK(count_atoms(n, secrets, d) == count_atoms_recursive(n, secrets, d));
        } else if (n >= 2) {
          CHECK(count_atoms(n, secrets, d) < count_atoms_recursive(n, secrets, d));
        }
      }
    }
  }
}

TEST_CASE("canonical order is sorted and stable") {
  const auto a = enumerate_atoms(3, 2, 2);
  const auto b = enumerate_atoms(3, 2, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.atom(i) == b.atom(i));
    CHECK(a.index_of(a.atom(i)) == i);
    if (i > 0) CHECK(a.atom(i - 1) < a.atom(i));
  }
  // depth first, then chain, then secret
  CHECK(s(2) < kw(1, s(1)));
  CHECK(kw(1, s(2)) < kw(2, s(1)));
  CHECK(kw(1, kw(2, s(1))) < kw(1, kw(3, s(1))));
}

TEST_CASE("wrap and unwrap") {
  const auto u = enumerate_atoms(3, 3, 2);
  const auto k = *u.index_of(kw(2, s(1)));
  CHECK(u.atom(u.wrap(AgentId{1}, k)) == kw(1, kw(2, s(1))));
  CHECK(u.wrap(AgentId{2}, k) == kNoAtom);  // introspective
  CHECK(u.wrap(AgentId{1}, *u.index_of(kw(1, kw(2, s(1))))) == kNoAtom);  // too deep
  CHECK(u.unwrap(k) == *u.index_of(s(1)));
  CHECK(u.unwrap(*u.index_of(s(3))) == kNoAtom);
}

TEST_CASE("atom text round trip") {
  CHECK(to_string(s(3)) == "3");
  CHECK(to_string(kw(1, kw(2, s(3)))) == "kw(1,kw(2,3))");
  const auto u = enumerate_atoms(3, 2, 3);
  for (const auto& atom : u.atoms()) CHECK(parse_atom(to_string(atom)) == atom);
  CHECK(parse_atom(" kw( 2 , 1 ) ") == kw(2, s(1)));
  CHECK_THROWS_AS(parse_atom("kw(1)"), ParseError);
  CHECK_THROWS_AS(parse_atom("kw(1,2"), ParseError);
  CHECK_THROWS_AS(parse_atom("x"), ParseError);
}
