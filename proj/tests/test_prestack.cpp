#include <catch_amalgamated.hpp>

#include <random>

#include "cct/field.hpp"
#include "cct/fixtures.hpp"
#include "cct/prestack.hpp"

using namespace cct;

namespace {

using Q = Rationals;

std::shared_ptr<const Prestack<Q>> make(const std::string& name) { return std::make_shared<const Prestack<Q>>(fixture(name, Q{})); }

BimoduleSetting<Q> setting(const std::string& name) {
  auto p = make(name);
  return BimoduleSetting<Q>(p, p);
}

const std::vector<std::string> all_fixtures{"FIX0", "FIX1", "FIX2", "FIX3", "FIX4", "A3TW"};

bool same_actions(const FDModule<Q>& a, const FDModule<Q>& b) {
  if (a.dims() != b.dims()) return false;
  const auto& c = a.category();
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f)
        if (a.action(x, y, f) != b.action(x, y, f)) return false;
  return true;
}

}  // namespace

TEST_CASE("prestack validation") {
  Q q;
  for (const auto& name : all_fixtures) {
    INFO(name);
    CHECK(!fixture(name, q).violation());
  }
  auto bad = broken_cocycle_z3(q);
  auto v = bad.violation();
  REQUIRE(v);
  CHECK(v->axiom == "cocycle");
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  // coherence at an identity must be the identity
  auto base = a2_base();
  auto p = Prestack<Q>::constant(q, base);
  p.set_coherence(base.morphism_index("V<U"), base.morphism_index("1_V"), 0, {q.from_int(3)});
  REQUIRE(p.violation());
  CHECK(p.violation()->axiom == "normalization");

  // dual numbers on x < y < z
  auto a3 = a3_base();
  auto d = dual_numbers(q);
  std::size_t yz = a3.morphism_index("y<z"), xy = a3.morphism_index("x<y");
  auto chain = Prestack<Q>::constant(a3, d);
  Vec<Q> one_plus_x{q.one(), q.one()}, just_x{q.zero(), q.one()};
  chain.set_coherence(yz, xy, 0, one_plus_x);
  CHECK(!chain.violation());
  chain.set_coherence(yz, xy, 0, just_x);
  REQUIRE(chain.violation());
  CHECK(chain.violation()->axiom == "invertibility");

  // (y<z)* = (x ↦ -x) while (x<z)* is the identity: the identity coherence is not natural
  auto twisted = Prestack<Q>::constant(a3, d);
  Matrix<Q> neg = Matrix<Q>::identity(q, 2);
  neg(1, 1) = q.from_int(-1);
  twisted.set_restriction(yz, LinearFunctor<Q>{d, d, {0}, {neg}});
  REQUIRE(twisted.violation());
  CHECK(twisted.violation()->axiom == "naturality");
  CHECK(twisted.violation()->path == "/coherence/y<z,x<y");

  // restriction that is not a functor
  auto f4 = dual_numbers_on_a2(q);
  Matrix<Q> m(q, 1, 2);
  m(0, 0) = q.one();
  m(0, 1) = q.one();
  f4.set_restriction(f4.base().morphism_index("V<U"), LinearFunctor<Q>{dual_numbers(q), ground_field(q), {0}, {m}});
  REQUIRE(f4.violation());
  CHECK(f4.violation()->axiom == "restriction");
}

TEST_CASE("graded categories of prestacks") {
  Q q;
  for (const auto& name : all_fixtures) {
    INFO(name);
    auto g = grothendieck(make(name));
    CHECK(!g.violation());
  }
  auto g1 = grothendieck(make("FIX1"));
  for (std::size_t f = 0; f < g1.base().num_morphisms(); ++f) CHECK(g1.dim(f, 0, 0) == 1);
  auto g4 = grothendieck(make("FIX4"));
  CHECK(g4.dim(g4.base().morphism_index("V<U"), 0, 0) == 1);
  CHECK(g4.dim(g4.base().morphism_index("1_U"), 0, 0) == 2);
  CHECK_THROWS_AS(grothendieck(std::make_shared<const Prestack<Q>>(broken_cocycle_z3(q))), ValidationError);
}

TEST_CASE("twist and r categories") {
  for (const auto& name : all_fixtures) {
    INFO(name);
    auto s = setting(name);
    CHECK(!s.t.category()->violation());
    CHECK(!s.r.category()->violation());
    CHECK(!s.pi.violation());
  }
  {
    auto s = setting("FIX0");
    CHECK(s.t.category()->num_objects() == 1);
    CHECK(s.t.category()->total_dim() == 1);
    CHECK(s.r.category()->total_dim() == 1);
  }
  {
    auto s = setting("FIX1");
    const auto& t = *s.t.category();
    CHECK(t.num_objects() == 3);
    CHECK(t.total_dim() == 5);
    std::size_t u = s.base().morphism_index("V<U");
    std::size_t tu = s.t.object_of(0, u, 0);
    CHECK(t.hom_dim(tu, tu) == 1);
    // r is the path algebra of V -> U: three basis elements
    const auto& r = *s.r.category();
    CHECK(r.num_objects() == 2);
    CHECK(r.total_dim() == 3);
    std::size_t rU = s.r.object_of(0, s.base().object_index("U"), 0);
    std::size_t rV = s.r.object_of(0, s.base().object_index("V"), 0);
    CHECK(r.hom_dim(rV, rU) == 1);
    CHECK(r.hom_dim(rU, rV) == 0);
    CHECK(s.pi.object_map[tu] == rV);
    CHECK(s.pi.object_map[s.t.object_of(0, s.base().morphism_index("1_U"), 0)] == rU);
    CHECK(s.pi.object_map[s.t.object_of(0, s.base().morphism_index("1_V"), 0)] == rV);
  }
  {
    auto s = setting("FIX3");
    const auto& r = *s.r.category();
    REQUIRE(r.num_objects() == 1);
    CHECK(r.hom_dim(0, 0) == 2);
    // the non-identity basis element squares to the identity: k[Z/2]
    Vec<Q> id = r.identity(0);
    std::size_t g = id[0] == Q{}.one() ? 1 : 0;
    Vec<Q> e = unit_vector(Q{}, 2, g);
    CHECK(r.compose(0, 0, 0, e, e) == id);
    // one twist object per group element
    CHECK(s.t.category()->num_objects() == 2);
  }
}

TEST_CASE("graded bimodules from the diagonal") {
  for (const auto& name : all_fixtures) {
    INFO(name);
    auto s = setting(name);
    auto d = diagonal_bimodule(s);
    CHECK(!d.violation());
    auto pd = pi_star(s, d);
    CHECK(!pd.violation());
    auto reg = graded_regular_bimodule(s);
    CHECK(!reg.violation());
    CHECK(same_actions(pd, reg));
    CHECK(is_fibered(s, reg));
    auto back = pi_lower(s, reg);
    CHECK(!back.violation());
    CHECK(same_actions(back, d));
  }
  auto s = setting("FIX1");
  CHECK(pi_star(s, diagonal_bimodule(s)).dims() == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("fibered bimodules and the comparison functors") {
  std::mt19937_64 rng(17);
  for (const auto& name : all_fixtures) {
    INFO(name);
    auto s = setting(name);
    CHECK(is_fibered(s, FDModule<Q>::zero(s.t.category())));
    std::vector<FDModule<Q>> ns;
    for (int i = 0; i < 4; ++i) ns.push_back(random_module(s.r.category(), rng));
    for (std::size_t x = 0; x < s.r.category()->num_objects(); ++x) ns.push_back(representable(s.r.category(), x));
    for (const auto& n : ns) {
      auto m = pi_star(s, n);
      REQUIRE(is_fibered(s, m));
      auto nn = pi_lower(s, m);
      CHECK(!nn.violation());
      auto unit = pi_unit(s, n);
      CHECK(is_module_map(n, nn, unit));
      auto mm = pi_star(s, nn);
      auto counit = pi_counit(s, m);
      CHECK(is_module_map(mm, m, counit));
      CHECK(is_isomorphism(counit));
    }
    for (std::size_t i = 0; i < ns.size(); ++i)
      for (std::size_t j = 0; j < ns.size(); j += 2) CHECK(hom_dim(ns[i], ns[j]) == hom_dim(pi_star(s, ns[i]), pi_star(s, ns[j])));
  }
  auto s = setting("FIX1");
  std::size_t U = s.base().object_index("U");
  auto p = projective_bimodule(s, 0, s.base().identity(U), 0);
  CHECK(!is_fibered(s, p));
  CHECK_THROWS_AS(pi_lower(s, p), NotFibered);
}

TEST_CASE("projective bimodules and canonical maps") {
  auto s = setting("FIX1");
  const auto& b = s.base();
  std::size_t u = b.morphism_index("V<U"), U = b.object_index("U"), V = b.object_index("V");
  std::size_t tu = s.t.object_of(0, u, 0), t1u = s.t.object_of(0, b.identity(U), 0), t1v = s.t.object_of(0, b.identity(V), 0);
  auto pu = projective_bimodule(s, 0, u, 0);
  CHECK(pu.dim(tu) == 1);
  CHECK(pu.dim(t1v) == 0);
  CHECK(pu.dim(t1u) == 0);
  // P_{1_V} at t_u: u = u · 1_V · 1_V
  CHECK(projective_bimodule(s, 0, b.identity(V), 0).dim(tu) == 1);
  CHECK(projective_bimodule(s, 0, b.identity(U), 0).dim(tu) == 1);
  CHECK(hom_dim(pu, pu) == 1);

  auto pf = p_fib(s, 0, U, 0);
  CHECK(pf.dim(s.r.object_of(0, V, 0)) == 1);

  auto dl = delta_l(s, u, b.identity(V), 0, 0);
  CHECK(dl.source == tu);
  CHECK(dl.target == t1v);
  auto src = representable(s.t.category(), dl.source);
  auto dst = representable(s.t.category(), dl.target);
  CHECK(is_module_map(src, dst, dl.map));
  for (std::size_t x = 0; x < src.category().num_objects(); ++x)
    if (src.dim(x) > 0 && dst.dim(x) > 0) CHECK(rank(dl.map.components[x]) == src.dim(x));

  for (const auto& name : all_fixtures) {
    INFO(name);
    auto st = setting(name);
    const auto& bs = st.base();
    for (std::size_t uu = 0; uu < bs.num_morphisms(); ++uu) {
      std::size_t Vv = bs.src(uu), Uu = bs.dst(uu);
      for (std::size_t bo = 0; bo < st.b->fiber(Vv).num_objects(); ++bo) {
        for (std::size_t ao = 0; ao < st.a->fiber(Uu).num_objects(); ++ao) {
          auto r1 = delta_r(st, bs.identity(Vv), uu, bo, ao);
          CHECK(r1.source == r1.target);
          for (const auto& c : r1.map.components) CHECK(c.is_identity());
        }
        for (std::size_t ao = 0; ao < st.a->fiber(Uu).num_objects(); ++ao) {
          auto l1 = delta_l(st, bs.identity(Uu), uu, bo, ao);
          for (const auto& c : l1.map.components) CHECK(c.is_identity());
        }
      }
      // δ^l_p δ^r_q = δ^r_q δ^l_p from P_{q*B, puq, A'} to P_{B, u, p*A'}
      for (std::size_t pp = 0; pp < bs.num_morphisms(); ++pp) {
        if (bs.src(pp) != Uu) continue;
        for (std::size_t qq = 0; qq < bs.num_morphisms(); ++qq) {
          if (bs.dst(qq) != Vv) continue;
          for (std::size_t bo = 0; bo < st.b->fiber(Vv).num_objects(); ++bo)
            for (std::size_t ao = 0; ao < st.a->fiber(bs.dst(pp)).num_objects(); ++ao) {
              auto r_first = delta_r(st, qq, bs.compose(pp, uu), bo, ao);
              auto l_after = delta_l(st, pp, uu, bo, ao);
              auto l_first = delta_l(st, pp, bs.compose(uu, qq), st.b->pull(qq, bo), ao);
              auto r_after = delta_r(st, qq, uu, bo, st.a->pull(pp, ao));
              REQUIRE(r_first.source == l_first.source);
              REQUIRE(l_after.target == r_after.target);
              auto lhs = compose_maps(l_after.map, r_first.map);
              auto rhs = compose_maps(r_after.map, l_first.map);
              for (std::size_t x = 0; x < lhs.components.size(); ++x) CHECK(lhs.components[x] == rhs.components[x]);
            }
        }
      }
    }
  }
}

TEST_CASE("cleavage is cartesian") {
  for (const auto& name : all_fixtures) {
    INFO(name);
    auto g = grothendieck(make(name));
    const auto& b = g.base();
    for (std::size_t f = 0; f < b.num_morphisms(); ++f)
      for (std::size_t h = 0; h < b.num_morphisms(); ++h) {
        if (!b.composable(f, h)) continue;
        for (std::size_t bo = 0; bo < g.prestack().fiber(b.dst(f)).num_objects(); ++bo)
          for (std::size_t c = 0; c < g.prestack().fiber(b.src(h)).num_objects(); ++c) CHECK(is_invertible(g.left_cleavage_matrix(f, h, bo, c)));
      }
  }
}
