#include <catch_amalgamated.hpp>

#include <set>

#include "cct/category.hpp"

using namespace cct;

namespace {

FiniteCategory a2() { return FiniteCategory({"U", "V"}, {{"1_U", "U", "U"}, {"1_V", "V", "V"}, {"u", "V", "U"}}, {{"U", "1_U"}, {"V", "1_V"}}, {}); }

FiniteCategory square() { return FiniteCategory::poset({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}); }

// All (p, q) with p u q = target, found by trying every pair.
std::set<std::pair<std::string, std::string>> brute_factorizations(const FiniteCategory& c, const std::string& u, const std::string& target) {
  std::set<std::pair<std::string, std::string>> out;
  std::size_t ui = c.morphism_index(u), ti = c.morphism_index(target);
  for (std::size_t p = 0; p < c.num_morphisms(); ++p)
    for (std::size_t q = 0; q < c.num_morphisms(); ++q)
      if (c.composable(p, ui) && c.composable(ui, q) && c.compose(c.compose(p, ui), q) == ti)
        out.insert({c.morphism(p).id, c.morphism(q).id});
  return out;
}

std::size_t count_chains(const FiniteCategory& c, int n) {
  // dynamic programming over endpoints
  std::vector<std::size_t> ways(c.num_objects(), 1);
  for (int k = 0; k < n; ++k) {
    std::vector<std::size_t> next(c.num_objects(), 0);
    for (const auto& m : c.morphisms()) next[m.dst] += ways[m.src];
    ways = next;
  }
  std::size_t total = 0;
  for (auto w : ways) total += w;
  return total;
}

}  // namespace

TEST_CASE("category validation") {
  CHECK(!FiniteCategory::point().violation());
  CHECK(!a2().violation());
  CHECK(!square().violation());
  CHECK(!FiniteCategory::cyclic_group(2).violation());
  CHECK(!FiniteCategory::cyclic_group(3).violation());

  // a monoid {1, a, b} with a non-associative table
  FiniteCategory bad({"*"}, {{"1", "*", "*"}, {"a", "*", "*"}, {"b", "*", "*"}}, {{"*", "1"}},
                     {{"a", "a", "b"}, {"a", "b", "b"}, {"b", "a", "a"}, {"b", "b", "b"}});
  auto v = bad.violation();
  REQUIRE(v);
  CHECK(v->axiom == "associativity");
  CHECK(v->detail.find("(a, a, a)") != std::string::npos);
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  FiniteCategory missing({"U", "V"}, {{"1_U", "U", "U"}, {"1_V", "V", "V"}, {"u", "V", "U"}}, {{"U", "1_U"}}, {});
  REQUIRE(missing.violation());
  CHECK(missing.violation()->path == "/base/identities");

  FiniteCategory incomplete({"*"}, {{"1", "*", "*"}, {"g", "*", "*"}}, {{"*", "1"}}, {});
  REQUIRE(incomplete.violation());
  CHECK(incomplete.violation()->axiom == "totality");
}

TEST_CASE("poset detection") {
  CHECK(a2().is_poset());
  CHECK(!FiniteCategory::cyclic_group(2).is_poset());
  CHECK(square().is_poset());
  CHECK(square().num_morphisms() == 9);
  CHECK(FiniteCategory::point().is_poset());
}

TEST_CASE("slices") {
  auto c = a2();
  auto s = c.slice(c.object_index("U"));
  CHECK(s.category.num_objects() == 2);
  CHECK(c.morphism(s.object_arrow[s.terminal]).id == "1_U");
  CHECK(!s.category.violation());
  // terminal: one morphism from every object into 1_U
  for (std::size_t x = 0; x < s.category.num_objects(); ++x) CHECK(s.category.hom(x, s.terminal).size() == 1);

  CHECK(FiniteCategory::point().slice(0).category.num_objects() == 1);

  auto sq = square();
  auto top = sq.slice(sq.object_index("d"));
  std::size_t into_top = 0;
  for (const auto& m : sq.morphisms()) into_top += m.dst == sq.object_index("d");
  CHECK(top.category.num_objects() == into_top);
  CHECK(top.category.num_objects() == 4);
  CHECK(!top.category.violation());

  auto z2 = FiniteCategory::cyclic_group(2);
  auto zs = z2.slice(0);
  CHECK(zs.category.num_objects() == 2);
  CHECK(zs.category.num_morphisms() == 4);
  CHECK(!zs.category.violation());
}

TEST_CASE("factorization category") {
  auto pt = FiniteCategory::point().fact();
  CHECK(pt.category.num_objects() == 1);
  CHECK(pt.category.num_morphisms() == 1);

  auto c = a2();
  auto f = c.fact();
  CHECK(f.category.num_objects() == 3);
  CHECK(!f.category.violation());
  auto homs = [&](const std::string& from, const std::string& to) {
    std::set<std::pair<std::string, std::string>> out;
    for (std::size_t m : f.category.hom(f.category.object_index(from), f.category.object_index(to)))
      out.insert({c.morphism(f.morphism_pq[m].first).id, c.morphism(f.morphism_pq[m].second).id});
    return out;
  };
  using S = std::set<std::pair<std::string, std::string>>;
  CHECK(homs("u", "u") == S{{"1_U", "1_V"}});
  CHECK(homs("1_V", "u") == S{{"u", "1_V"}});
  CHECK(homs("1_U", "u") == S{{"1_U", "u"}});
  CHECK(homs("u", "1_V").empty());

  auto z2 = FiniteCategory::cyclic_group(2);
  auto fz = z2.fact();
  CHECK(fz.category.num_objects() == 2);
  auto h = fz.category.hom(fz.category.object_index("1"), fz.category.object_index("1"));
  std::set<std::pair<std::string, std::string>> got;
  for (auto m : h) got.insert({z2.morphism(fz.morphism_pq[m].first).id, z2.morphism(fz.morphism_pq[m].second).id});
  CHECK(got == S{{"1", "1"}, {"g", "g"}});
  CHECK(!fz.category.violation());

  for (const auto& base : {a2(), square(), z2, FiniteCategory::cyclic_group(3)}) {
    auto fc = base.fact();
    CHECK(!fc.category.violation());
    for (std::size_t x = 0; x < fc.category.num_objects(); ++x)
      for (std::size_t y = 0; y < fc.category.num_objects(); ++y) {
        const auto& u = base.morphism(fc.object_arrow[x]).id;
        const auto& t = base.morphism(fc.object_arrow[y]).id;
        CHECK(fc.category.hom(x, y).size() == brute_factorizations(base, u, t).size());
      }
  }
}

TEST_CASE("nerve enumeration") {
  auto pt = FiniteCategory::point();
  CHECK(pt.nerve(2).size() == 1);
  auto c = a2();
  CHECK(c.nerve(0).size() == 2);
  CHECK(c.nerve(1).size() == 3);
  CHECK(c.nerve(2).size() == 4);
  CHECK(c.nerve(3).size() == 5);
  auto z2 = FiniteCategory::cyclic_group(2);
  for (int n = 0; n <= 3; ++n) CHECK(z2.nerve(n).size() == (std::size_t(1) << n));
  auto sq = square();
  for (int n = 0; n <= 4; ++n) CHECK(sq.nerve(n).size() == count_chains(sq, n));
  CHECK_THROWS_AS(c.nerve(7), CapExceeded);
  CHECK(c.nerve(7, 8).size() == 9);
  CHECK(c.normalized_nerve(2).empty());
  CHECK(sq.normalized_nerve(2).size() == 2);
}

TEST_CASE("faces") {
  auto c = a2();
  NerveChain u{{c.morphism_index("u")}, c.object_index("V")};
  auto f0 = c.face(u, 0);
  CHECK(f0.chain.degree() == 0);
  CHECK(c.object_id(f0.chain.object) == "U");
  CHECK(c.morphism(f0.p).id == "1_U");
  CHECK(c.morphism(f0.q).id == "u");
  auto f1 = c.face(u, 1);
  CHECK(c.object_id(f1.chain.object) == "V");
  CHECK(c.morphism(f1.p).id == "u");
  CHECK(c.morphism(f1.q).id == "1_V");

  NerveChain vu{{c.morphism_index("1_V"), c.morphism_index("u")}, c.object_index("V")};
  auto inner = c.face(vu, 1);
  CHECK(inner.chain == u);
  CHECK(c.is_identity(inner.p));
  CHECK(c.is_identity(inner.q));
  CHECK_THROWS_AS(c.face(u, 2), IndexOutOfRange);
  CHECK_THROWS_AS(c.face(u, -1), IndexOutOfRange);
}

TEST_CASE("simplicial identities and outer-face composites") {
  for (const auto& base : {a2(), square(), FiniteCategory::cyclic_group(2)}) {
    for (int n = 1; n <= 4; ++n)
      for (const auto& v : base.nerve(n)) {
        std::size_t whole = base.composite(v);
        auto f0 = base.face(v, 0);
        CHECK(base.compose(base.composite(f0.chain), v.arrows.front()) == whole);
        CHECK(base.compose(base.compose(f0.p, base.composite(f0.chain)), f0.q) == whole);
        auto fn = base.face(v, n);
        CHECK(base.compose(v.arrows.back(), base.composite(fn.chain)) == whole);
        CHECK(base.compose(base.compose(fn.p, base.composite(fn.chain)), fn.q) == whole);
        if (n < 2) continue;
        for (int j = 1; j <= n; ++j)
          for (int i = 0; i < j; ++i)
            CHECK(base.face(base.face(v, j).chain, i).chain == base.face(base.face(v, i).chain, j - 1).chain);
        for (int i = 0; i <= n; ++i) {
          auto s = base.degeneracy(v, i);
          CHECK(base.face(s, i).chain == v);
          CHECK(base.face(s, i + 1).chain == v);
        }
      }
  }
}

TEST_CASE("opposite category") {
  auto c = a2().opposite();
  CHECK(!c.violation());
  auto u = c.morphism(c.morphism_index("u"));
  CHECK(c.object_id(u.src) == "U");
  auto z3 = FiniteCategory::cyclic_group(3).opposite();
  CHECK(!z3.violation());
}
