#include <catch_amalgamated.hpp>

#include <random>

#include "cct/field.hpp"
#include "cct/fixtures.hpp"
#include "cct/natsys.hpp"
#include "oracles.hpp"

using namespace cct;

namespace {

using Q = Rationals;

template <class K>
FDModule<K> constant_presheaf(const LinearCategoryPtr<K>& c) {
  FDModule<K> m(c, std::vector<std::size_t>(c->num_objects(), 1));
  for (std::size_t x = 0; x < c->num_objects(); ++x)
    for (std::size_t y = 0; y < c->num_objects(); ++y)
      for (std::size_t f = 0; f < c->hom_dim(x, y); ++f) m.action(x, y, f) = Matrix<K>::identity(c->field(), 1);
  return m;
}

template <class K>
std::map<int, std::size_t> nerve_oracle(const K& k, const FiniteCategory& c, int max_deg) {
  return oracle::nerve_cohomology<K>(
      k, c.num_objects(), c.num_morphisms(), [&](std::size_t f) { return c.src(f); }, [&](std::size_t f) { return c.dst(f); },
      [&](std::size_t g, std::size_t f) { return c.compose(g, f); }, max_deg);
}

template <class K>
void check_augmented_exact(const Resolution<K>& r, const FDModule<K>& target, int upto) {
  for (std::size_t y = 0; y < target.category().num_objects(); ++y) {
    Matrix<K> eps = free_to_module_matrix(r.terms[0], r.augmentation, target, y);
    CHECK(rank(eps) == target.dim(y));
    for (int d = 1; d <= upto; ++d) {
      Matrix<K> dn = resolution_differential_at(r, d, y);
      Matrix<K> below = d == 1 ? eps : resolution_differential_at(r, d - 1, y);
      CHECK((below * dn).is_zero());
      CHECK(rank(dn) == below.cols() - rank(below));
    }
  }
}

std::shared_ptr<const BimoduleSetting<Q>> setting(const std::string& name) {
  Q q;
  auto p = std::make_shared<const Prestack<Q>>(fixture(name, q));
  return std::make_shared<const BimoduleSetting<Q>>(p, p);
}

bool same_module(const FDModule<Q>& a, const FDModule<Q>& b) {
  if (a.dims() != b.dims()) return false;
  const auto& c = a.category();
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f)
        if (!(a.action(x, y, f) == b.action(x, y, f))) return false;
  return true;
}

}  // namespace

TEST_CASE("constant systems and the presheaf inclusion") {
  Q q;
  NatSetting<Q> pt(q, FiniteCategory::point());
  CHECK(constant_system(pt).dims() == std::vector<std::size_t>{1});
  NatSetting<Q> a2(q, a2_base());
  auto k = constant_system(a2);
  CHECK(k.dims().size() == 3);
  CHECK(!k.violation());
  CHECK(constant_system(a2, 0).total_dim() == 0);

  // I of the constant presheaf is the constant system
  CHECK(same_module(include_presheaf(a2, constant_presheaf(a2.lin)), k));

  // F(V) = k, F(U) = 0
  std::size_t U = a2.cat.object_index("U"), V = a2.cat.object_index("V");
  std::vector<std::size_t> d(2);
  d[V] = 1;
  FDModule<Q> f(a2.lin, d);
  f.action(V, V, 0) = Matrix<Q>::identity(q, 1);
  REQUIRE(!f.violation());
  auto i = include_presheaf(a2, f);
  CHECK(!i.violation());
  CHECK(i.dim(a2.object_of(a2.cat.identity(V))) == 1);
  CHECK(i.dim(a2.object_of(a2.cat.identity(U))) == 0);
  CHECK(i.dim(a2.object_of(a2.cat.morphism_index("V<U"))) == 1);
}

TEST_CASE("I is fully faithful") {
  Q q;
  std::mt19937_64 rng(17);
  for (const auto& base : {a2_base(), square_base(), FiniteCategory::cyclic_group(2)}) {
    NatSetting<Q> ns(q, base);
    for (int trial = 0; trial < 4; ++trial) {
      auto f = random_module(ns.lin, rng);
      auto g = random_module(ns.lin, rng);
      auto fi = include_presheaf(ns, f), gi = include_presheaf(ns, g);
      CHECK(!fi.violation());
      CHECK(hom_dim(f, g) == hom_dim(fi, gi));
      CHECK(hom_dim(f, f) == hom_dim(fi, fi));
    }
  }
}

TEST_CASE("bar resolution shape and exactness") {
  Q q;
  NatSetting<Q> pt(q, FiniteCategory::point());
  auto bp = bar_resolution(pt, 3);
  for (int n = 0; n <= 3; ++n) CHECK(bp.chains[n].size() == 1);
  check_augmented_exact(bp.res, constant_system(pt), 3);

  NatSetting<Q> a2(q, a2_base());
  auto ba = bar_resolution(a2, 3);
  std::vector<std::size_t> counts;
  for (const auto& c : ba.chains) counts.push_back(c.size());
  CHECK(counts == std::vector<std::size_t>{2, 3, 4, 5});
  check_augmented_exact(ba.res, constant_system(a2), 3);

  NatSetting<Q> z2(q, FiniteCategory::cyclic_group(2));
  auto bz = bar_resolution(z2, 3);
  counts.clear();
  for (const auto& c : bz.chains) counts.push_back(c.size());
  CHECK(counts == std::vector<std::size_t>{1, 2, 4, 8});
  check_augmented_exact(bz.res, constant_system(z2), 3);

  NatSetting<Q> sq(q, square_base());
  check_augmented_exact(bar_resolution(sq, 3).res, constant_system(sq), 3);
  check_augmented_exact(bar_resolution(sq, 3, true).res, constant_system(sq), 3);
  CHECK(bar_resolution(sq, 3, true).chains[3].empty());

  CHECK_THROWS_AS(bar_resolution(a2, 7), CapExceeded);
  CHECK_THROWS_AS(natural_system_cohomology(a2, constant_system(a2), 6), CapExceeded);
  CHECK_NOTHROW(bar_resolution(a2, 7, false, 8));
}

TEST_CASE("cohomology of the constant natural system") {
  Q q;
  PrimeField f2(2), f3(3);
  for (const auto& base : {FiniteCategory::point(), a2_base(), square_base(), FiniteCategory::cyclic_group(2)}) {
    NatSetting<Q> ns(q, base);
    auto got = natural_system_cohomology(ns, constant_system(ns), 3);
    CHECK(got == nerve_oracle(q, base, 3));
    CHECK(got == natural_system_cohomology(ns, constant_system(ns), 3, true));
  }
  NatSetting<Q> a2(q, a2_base());
  CHECK(natural_system_cohomology(a2, constant_system(a2), 3) == std::map<int, std::size_t>{{0, 1}, {1, 0}, {2, 0}, {3, 0}});
  NatSetting<Q> z2(q, FiniteCategory::cyclic_group(2));
  CHECK(natural_system_cohomology(z2, constant_system(z2), 2) == std::map<int, std::size_t>{{0, 1}, {1, 0}, {2, 0}});

  NatSetting<PrimeField> z2f(f2, FiniteCategory::cyclic_group(2));
  auto got2 = natural_system_cohomology(z2f, constant_system(z2f), 3);
  CHECK(got2 == oracle::cyclic_group_cohomology(f2, 2, 3));
  CHECK(got2 == nerve_oracle(f2, FiniteCategory::cyclic_group(2), 3));
  NatSetting<PrimeField> z3f(f3, FiniteCategory::cyclic_group(3));
  CHECK(natural_system_cohomology(z3f, constant_system(z3f), 3) == oracle::cyclic_group_cohomology(f3, 3, 3));

  auto circle = FiniteCategory::poset({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"d", "b"}, {"d", "c"}});
  NatSetting<PrimeField> cf(f2, circle);
  auto gc = natural_system_cohomology(cf, constant_system(cf), 3);
  CHECK(gc == nerve_oracle(f2, circle, 3));
  CHECK(gc.at(1) == 1);
}

TEST_CASE("natural system cohomology agrees with Ext over Fact") {
  Q q;
  std::mt19937_64 rng(41);
  for (const auto& base : {a2_base(), FiniteCategory::cyclic_group(2), a3_base()}) {
    NatSetting<Q> ns(q, base);
    for (int trial = 0; trial < 3; ++trial) {
      auto n = random_module(ns.fact_lin, rng);
      auto bw = natural_system_cohomology(ns, n, 3);
      CHECK(bw == ext_dims(constant_system(ns), n, 3));
      CHECK(bw == natural_system_cohomology(ns, n, 3, true));
      CHECK(bw.at(0) == hom_dim(constant_system(ns), n));
    }
  }
}

TEST_CASE("presheaf comparison") {
  Q q;
  std::mt19937_64 rng(3);
  for (const auto& base : {FiniteCategory::point(), a2_base(), square_base()}) {
    NatSetting<Q> ns(q, base);
    auto [lhs, rhs] = presheaf_comparison(ns, constant_presheaf(ns.lin), 3);
    CHECK(lhs == rhs);
    for (int trial = 0; trial < 3; ++trial) {
      auto [l2, r2] = presheaf_comparison(ns, random_module(ns.lin, rng), 3);
      CHECK(l2 == r2);
    }
  }
  NatSetting<Q> pt(q, FiniteCategory::point());
  CHECK(presheaf_comparison(pt, constant_presheaf(pt.lin), 3).first == std::map<int, std::size_t>{{0, 1}, {1, 0}, {2, 0}, {3, 0}});
}

TEST_CASE("slice functors are functors") {
  for (const auto& name : {"FIX0", "FIX1", "FIX2", "FIX3", "FIX4", "A3TW"}) {
    auto s = setting(name);
    const auto& base = s->base();
    for (std::size_t w = 0; w < base.num_objects(); ++w)
      for (std::size_t a = 0; a < s->a->fiber(w).num_objects(); ++a) {
        SliceSetting<Q> ss(s, w, a, a);
        INFO(name << " W=" << base.object_id(w));
        CHECK(!phi_functor(ss).violation());
        CHECK(!j_functor(ss).violation());
      }
  }
}

TEST_CASE("Psi star and Phi star") {
  std::mt19937_64 rng(77);
  for (const auto& name : {"FIX0", "FIX1", "FIX2", "FIX3", "FIX4", "A3TW"}) {
    auto s = setting(name);
    const auto& base = s->base();
    std::vector<FDModule<Q>> mods{pi_star(*s, diagonal_bimodule(*s))};
    for (int trial = 0; trial < 2; ++trial) mods.push_back(pi_star(*s, random_module(s->r.category(), rng)));
    for (std::size_t w = 0; w < base.num_objects(); ++w) {
      SliceSetting<Q> ss(s, w, 0, 0);
      auto j = j_functor(ss);
      for (const auto& m : mods) {
        INFO(name << " W=" << base.object_id(w));
        auto psi = psi_star(ss, m);
        CHECK(!psi.violation());
        CHECK(same_module(psi, restrict_along(j, pi_lower(*s, m))));
        auto phi = phi_star(ss, m);
        CHECK(!phi.violation());
        // the square commutes through the canonical identification θ
        auto ipsi = include_presheaf(ss.ns, psi);
        auto theta = slice_restriction_iso(ss, m);
        CHECK(is_module_map(ipsi, phi, theta));
        CHECK(is_isomorphism(theta));
      }
    }
  }
  // Ψ* of Π*D over FIX1 at W = U: 1-dim on both slice objects
  auto s = setting("FIX1");
  SliceSetting<Q> ss(s, s->base().object_index("U"), 0, 0);
  CHECK(psi_star(ss, pi_star(*s, diagonal_bimodule(*s))).dims() == std::vector<std::size_t>{1, 1});
  CHECK(psi_star(ss, FDModule<Q>::zero(s->t.category())).total_dim() == 0);
  // a non-fibered bimodule
  auto p = projective_bimodule(*s, 0, s->base().identity(s->base().object_index("U")), 0);
  CHECK_THROWS_AS(psi_star(ss, p), NotFibered);
  CHECK_NOTHROW(phi_star(ss, p));
}

TEST_CASE("Phi star of projectives counts factorizations") {
  for (const auto& name : {"FIX1", "FIX2", "FIX4"}) {
    auto s = setting(name);
    const auto& base = s->base();
    const auto& t = s->t;
    for (std::size_t w = 0; w < base.num_objects(); ++w) {
      SliceSetting<Q> ss(s, w, 0, 0);
      for (std::size_t o = 0; o < t.objects().size(); ++o) {
        auto phi = phi_star(ss, representable(t.category(), o));
        const auto& ob = t.objects()[o];
        for (std::size_t x = 0; x < ss.ns.fact_lin->num_objects(); ++x) {
          // factorizations u' = p u q of the slice arrow u' through ob.u, weighted by fiber homs
          std::size_t u = ss.arrow(x), f = ss.structure(x);
          std::size_t bo = s->b->pull(base.compose(f, u), 0), ao = s->a->pull(f, 0);
          std::size_t count = 0;
          for (std::size_t p = 0; p < base.num_morphisms(); ++p)
            for (std::size_t q = 0; q < base.num_morphisms(); ++q) {
              if (!base.composable(p, ob.u) || !base.composable(ob.u, q)) continue;
              if (base.compose(p, base.compose(ob.u, q)) != u) continue;
              count += s->b->fiber(base.src(u)).hom_dim(bo, s->b->pull(q, ob.b)) * s->a->fiber(base.dst(ob.u)).hom_dim(ob.a, s->a->pull(p, ao));
            }
          CHECK(phi.dim(x) == count);
        }
      }
    }
  }
}

TEST_CASE("Phi shriek of the bar complex") {
  for (const auto& name : {"FIX0", "FIX1", "FIX2", "FIX3", "FIX4", "A3TW"}) {
    auto s = setting(name);
    const auto& base = s->base();
    for (std::size_t w = 0; w < base.num_objects(); ++w) {
      SliceSetting<Q> ss(s, w, 0, 0);
      auto bar = phi_shriek_on_bar(ss, 3);
      INFO(name << " W=" << base.object_id(w));
      for (std::size_t y = 0; y < s->t.objects().size(); ++y)
        for (int d = 2; d <= 3; ++d)
          CHECK((resolution_differential_at(bar.res, d - 1, y) * resolution_differential_at(bar.res, d, y)).is_zero());
    }
  }

  auto s = setting("FIX1");
  const auto& base = s->base();
  std::size_t U = base.object_index("U"), u = base.morphism_index("V<U");
  SliceSetting<Q> ss(s, U, 0, 0);
  auto bar = phi_shriek_on_bar(ss, 2);
  std::vector<std::size_t> expect{s->t_object(0, base.identity(base.object_index("V")), 0), s->t_object(0, base.identity(U), 0)};
  auto got = bar.res.terms[0].gens;
  std::sort(got.begin(), got.end());
  std::sort(expect.begin(), expect.end());
  CHECK(got == expect);

  // the degree-1 summand over the slice arrow u: (V, u) -> (U, 1_U)
  const auto& sl = ss.slice;
  std::size_t chain = 0;
  bool found = false;
  for (std::size_t j = 0; j < bar.chains[1].size(); ++j)
    if (sl.morphism_arrow[bar.chains[1][j].arrows[0]] == u) chain = j, found = true;
  REQUIRE(found);
  const auto& img = bar.res.differentials[0][chain];
  const auto& lower = bar.res.terms[0];
  auto off = lower.offsets(bar.res.terms[1].gens[chain]);
  auto [r1, r2, re] = s->right_cleavage(u, base.identity(U), 0, 0);
  auto [l1, l2, le] = s->left_cleavage(u, base.identity(base.object_index("V")), 0, 0);
  CHECK(bar.res.terms[1].gens[chain] == r1);
  CHECK(r1 == l1);
  Q q;
  for (std::size_t t = 0; t < lower.gens.size(); ++t) {
    Vec<Q> part(img.begin() + static_cast<std::ptrdiff_t>(off[t]), img.begin() + static_cast<std::ptrdiff_t>(off[t + 1]));
    if (lower.gens[t] == r2) CHECK(part == re);
    if (lower.gens[t] == l2) {
      for (auto& x : part) x = q.neg(x);
      CHECK(part == le);
    }
  }
}
