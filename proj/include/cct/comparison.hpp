#pragma once

// Executable versions of the comparison results: Ext over r against Ext over
// t, the bar complex transported along Phi_! and its contracting homotopy,
// the collapse to a single algebra on poset bases, the Σ-localization and
// stable flatness.

#include <array>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cct/natsys.hpp"

namespace cct {

using DimTable = std::map<int, std::size_t>;

struct CheckCase {
  std::string label;
  std::map<int, std::pair<std::size_t, std::size_t>> degrees;
  bool pass = true;
  std::string detail;
};

struct CheckReport {
  std::string check;
  std::string instance;
  std::vector<CheckCase> cases;
  bool pass = true;
  bool skipped = false;
  std::string reason;
  double millis = 0;

  void add(CheckCase c) {
    pass = pass && c.pass;
    cases.push_back(std::move(c));
  }

  /// lhs and rhs summed over all cases.
  std::map<int, std::pair<std::size_t, std::size_t>> degrees() const {
    std::map<int, std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : cases)
      for (const auto& [i, v] : c.degrees) {
        out[i].first += v.first;
        out[i].second += v.second;
      }
    return out;
  }

  const CheckCase* first_failure() const {
    for (const auto& c : cases)
      if (!c.pass) return &c;
    return nullptr;
  }
};

inline CheckCase compare_tables(std::string label, const DimTable& lhs, const DimTable& rhs) {
  CheckCase c{std::move(label), {}, lhs == rhs, {}};
  for (const auto& [i, v] : lhs) c.degrees[i].first = v;
  for (const auto& [i, v] : rhs) c.degrees[i].second = v;
  return c;
}

inline CheckCase boolean_case(std::string label, bool ok, std::string detail = {}) {
  CheckCase c{std::move(label), {}, ok, std::move(detail)};
  c.degrees[0] = {ok ? 1 : 0, 1};
  return c;
}

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double millis() const { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

template <class K>
using SettingPtr = std::shared_ptr<const BimoduleSetting<K>>;

template <class K>
using LabeledModules = std::vector<std::pair<std::string, FDModule<K>>>;

/// Diagonal, every representable over r, and seeded random modules.
template <class K>
LabeledModules<K> r_test_modules(const BimoduleSetting<K>& s, std::uint64_t seed, int n_random = 5) {
  LabeledModules<K> out;
  if (s.a == s.b) out.emplace_back("diagonal", diagonal_bimodule(s));
  const auto& rc = s.r.category();
  for (std::size_t x = 0; x < rc->num_objects(); ++x) out.emplace_back("P" + rc->object_id(x), representable(rc, x));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_random; ++i) out.emplace_back("random" + std::to_string(i), random_module(rc, rng, 2));
  return out;
}

// -- Ext over r vs Ext over t --------------------------------------------------

template <class K>
CheckReport check_ext_comparison(const BimoduleSetting<K>& s, const LabeledModules<K>& mods, int max_deg, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"ext-comparison", std::move(instance)};
  std::vector<Resolution<K>> over_r, over_t;
  std::vector<FDModule<K>> pulled;
  for (const auto& [name, m] : mods) {
    over_r.push_back(projective_resolution(m, max_deg + 1));
    pulled.push_back(pi_star(s, m));
    over_t.push_back(projective_resolution(pulled.back(), max_deg + 1));
  }
  for (std::size_t i = 0; i < mods.size(); ++i)
    for (std::size_t j = 0; j < mods.size(); ++j)
      rep.add(compare_tables("(" + mods[i].first + "," + mods[j].first + ")", ext_dims(over_r[i], mods[j].second, max_deg),
                             ext_dims(over_t[i], pulled[j], max_deg)));
  rep.millis = sw.millis();
  return rep;
}

/// HH^i = Ext^i(D, D) over r(A, A).
template <class K>
DimTable hochschild_dims(const BimoduleSetting<K>& s, int max_deg) {
  if (s.a != s.b) throw MathError("Hochschild cohomology needs the pair (A, A)");
  auto d = diagonal_bimodule(s);
  return ext_dims(d, d, max_deg);
}

// -- Π^* and Π_* ----------------------------------------------------------------

/// Π* and Π_* are inverse on fibered bimodules and Π* preserves Hom.
template <class K>
CheckReport check_pi_adjunction(const BimoduleSetting<K>& s, std::uint64_t seed, int count = 10, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"pi-adjunction", std::move(instance)};
  std::mt19937_64 rng(seed);
  std::vector<FDModule<K>> ns;
  for (int i = 0; i < count; ++i) ns.push_back(random_module(s.r.category(), rng, 2));
  std::vector<FDModule<K>> ms;
  for (const auto& n : ns) ms.push_back(pi_star(s, n));
  for (int i = 0; i < count; ++i) {
    const auto& m = ms[i];
    auto back = pi_lower(s, m);
    bool unit_ok = is_isomorphism(pi_unit(s, ns[i])) && is_module_map(ns[i], back, pi_unit(s, ns[i]));
    bool exact = back.dims() == ns[i].dims();
    if (exact) {
      const auto& c = *s.r.category();
      for (std::size_t x = 0; x < c.num_objects() && exact; ++x)
        for (std::size_t y = 0; y < c.num_objects() && exact; ++y)
          for (std::size_t f = 0; f < c.hom_dim(x, y); ++f)
            if (!(back.action(x, y, f) == ns[i].action(x, y, f))) exact = false;
    }
    auto counit = pi_counit(s, m);
    bool counit_ok = is_module_map(pi_star(s, back), m, counit) && is_isomorphism(counit);
    rep.add(boolean_case("round trip " + std::to_string(i), unit_ok && exact && counit_ok,
                         std::string(unit_ok ? "" : "unit ") + (exact ? "" : "values ") + (counit_ok ? "" : "counit")));
  }
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      CheckCase c{"hom(" + std::to_string(i) + "," + std::to_string(j) + ")", {}, true, {}};
      std::size_t lhs = hom_dim(ns[i], ns[j]), rhs = hom_dim(ms[i], ms[j]);
      c.degrees[0] = {lhs, rhs};
      c.pass = lhs == rhs;
      rep.add(std::move(c));
    }
  rep.millis = sw.millis();
  return rep;
}

// -- restriction to slices ------------------------------------------------------

template <class K>
LabeledModules<K> fibered_test_modules(const BimoduleSetting<K>& s, std::uint64_t seed, int n_random = 3) {
  LabeledModules<K> out;
  for (auto& [name, m] : r_test_modules(s, seed, n_random)) out.emplace_back("Pi*" + name, pi_star(s, m));
  return out;
}

/// Φ* I = I Ψ* through the canonical identification θ, for every (W, A, B).
template <class K>
CheckReport check_slice_restriction(const SettingPtr<K>& s, const LabeledModules<K>& fibered, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"slice-restriction", std::move(instance)};
  const auto& base = s->base();
  for (std::size_t w = 0; w < base.num_objects(); ++w)
    for (std::size_t a = 0; a < s->a->fiber(w).num_objects(); ++a)
      for (std::size_t b = 0; b < s->b->fiber(w).num_objects(); ++b) {
        SliceSetting<K> ss(s, w, a, b);
        for (const auto& [name, m] : fibered) {
          auto phi = phi_star(ss, m);
          auto ipsi = include_presheaf(ss.ns, psi_star(ss, m));
          auto theta = slice_restriction_iso(ss, m);
          bool ok = !phi.violation() && !ipsi.violation() && is_module_map(ipsi, phi, theta) && is_isomorphism(theta);
          CheckCase c{name + " W=" + base.object_id(w) + " A=" + std::to_string(a) + " B=" + std::to_string(b), {}, ok, {}};
          c.degrees[0] = {ipsi.total_dim(), phi.total_dim()};
          c.pass = ok && ipsi.dims() == phi.dims();
          rep.add(std::move(c));
        }
      }
  rep.millis = sw.millis();
  return rep;
}

// -- natural systems vs presheaves ----------------------------------------------

template <class K>
CheckReport check_presheaf_comparison(const FiniteCategory& base, const K& k, std::uint64_t seed, int max_deg, int n_random = 3,
                                      std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"presheaf-comparison", std::move(instance)};
  NatSetting<K> ns(k, base);
  const auto& c = *ns.lin;
  FDModule<K> unit(ns.lin, std::vector<std::size_t>(c.num_objects(), 1));
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t i = 0; i < c.hom_dim(x, y); ++i) unit.action(x, y, i) = Matrix<K>::identity(k, 1);
  auto [l0, r0] = presheaf_comparison(ns, unit, max_deg);
  rep.add(compare_tables("constant", l0, r0));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_random; ++i) {
    auto [l, r] = presheaf_comparison(ns, random_module(ns.lin, rng, 2), max_deg);
    rep.add(compare_tables("random" + std::to_string(i), l, r));
  }
  rep.millis = sw.millis();
  return rep;
}

// -- the transported bar complex ------------------------------------------------

/// Φ_!(B(k̲)) together with the data needed to write down its augmentation
/// to P^fib and the contracting homotopy.
template <class K>
struct TransportedBar {
  SliceSetting<K> ss;
  BarComplex<K> bar;  // over lin(Fact(U/W)^op)
  LinearFunctor<K> g;
  Resolution<K> res;  // over t
  FDModule<K> pfib;   // Π* P^fib_{B,W,A}
  std::vector<Vec<K>> augmentation;

  TransportedBar(const SettingPtr<K>& s, std::size_t w, std::size_t a, std::size_t b, int top)
      : ss(s, w, a, b), bar(bar_resolution(ss.ns, top)), g(phi_functor(ss)) {
    res = induce(g, bar.res);
    const auto& bs = *s;
    std::size_t R = bs.r.object_of(b, w, a);
    pfib = pi_star(bs, representable(bs.r.category(), R));
    // ε^f is (id ⊗ id) over f on the summand of the slice object f
    for (std::size_t j = 0; j < bar.chains[0].size(); ++j) {
      std::size_t f = ss.slice.object_arrow[bar.chains[0][j].object];
      std::size_t gx = res.terms[0].gens[j];
      std::size_t px = bs.pi.object_map[gx];
      std::size_t V = bs.base().src(f);
      augmentation.push_back(bs.r.element(px, R, f, bs.a->fiber(V).identity(bs.a->pull(f, a)), bs.b->fiber(V).identity(bs.b->pull(f, b))));
    }
  }

  int top() const { return res.length(); }

  Matrix<K> epsilon_at(std::size_t y) const { return free_to_module_matrix(res.terms[0], augmentation, pfib, y); }
  Matrix<K> d_at(int n, std::size_t y) const { return resolution_differential_at(res, n, y); }

  /// The single face ∂_i: S_n -> S_{n-1} at y; in degree 0 this is ε.
  Matrix<K> face_at(int n, int i, std::size_t y) const {
    if (n == 0) return epsilon_at(y);
    auto images = push_images(g, bar.res.terms[n], bar.res.terms[n - 1], bar_face_images(ss.ns, bar, n, i));
    return free_map_matrix(res.terms[n], res.terms[n - 1], images, y);
  }

  std::size_t slice_object_of(std::size_t base_arrow) const {
    return ss.slice.category.object_index(ss.bs->base().morphism(base_arrow).id);
  }

  /// h_{-1}: P^fib(y) -> S_0(y), α ⊗ β over w ↦ β ⊗ α in block (u', 1) of the summand w.
  Matrix<K> h_minus_at(std::size_t y) const {
    const auto& bs = *ss.bs;
    const auto& base = bs.base();
    const K& k = bs.field();
    const auto& yo = bs.t.objects()[y];
    std::size_t py = bs.pi.object_map[y];
    std::size_t R = bs.r.object_of(ss.b_obj, ss.apex, ss.a_obj);
    auto off = res.terms[0].offsets(y);
    Matrix<K> h(k, res.terms[0].dim_at(y), pfib.dim(y));
    for (std::size_t i = 0; i < pfib.dim(y); ++i) {
      auto [bl, ia, ib] = bs.r.locate(py, R, i);
      NerveChain c{{}, slice_object_of(bl.w)};
      std::size_t j = *bar.find(0, c);
      Vec<K> e = bs.t.element(y, res.terms[0].gens[j], yo.u, base.identity(base.src(yo.u)), unit_vector(k, bl.dim_b, ib),
                              unit_vector(k, bl.dim_a, ia));
      for (std::size_t r = 0; r < e.size(); ++r) h(off[j] + r, i) = e[r];
    }
    return h;
  }

  /// h_n: S_n(y) -> S_{n+1}(y), b ⊗ a in block (p, q) of the summand (v, f)
  /// ↦ (c_{f|v|,q,B} ∘ b) ⊗ a in block (p, 1) of the summand (q·v, f).
  Matrix<K> h_at(int n, std::size_t y) const {
    const auto& bs = *ss.bs;
    const auto& base = bs.base();
    const auto& sl = ss.slice;
    const K& k = bs.field();
    const auto& src = res.terms[n];
    const auto& dst = res.terms[n + 1];
    auto off = src.offsets(y), off2 = dst.offsets(y);
    Matrix<K> h(k, dst.dim_at(y), src.dim_at(y));
    for (std::size_t j = 0; j < src.gens.size(); ++j) {
      const auto& v = bar.chains[n][j];
      std::size_t s0 = sl.category.chain_source(v);
      std::size_t fv = sl.object_arrow[s0];  // f|v|
      const auto& gj = bs.t.objects()[src.gens[j]];
      for (const auto& bl : bs.t.blocks(y, src.gens[j])) {
        std::size_t q = bl.q;
        std::size_t x2 = slice_object_of(base.compose(fv, q));
        std::size_t qt = sl.category.num_morphisms();
        for (std::size_t m : sl.category.hom(x2, s0))
          if (sl.morphism_arrow[m] == q) qt = m;
        NerveChain w{{qt}, x2};
        w.arrows.insert(w.arrows.end(), v.arrows.begin(), v.arrows.end());
        std::size_t j2 = *bar.find(n + 1, w);
        std::size_t t2 = dst.gens[j2];
        std::size_t V2 = base.src(q);
        const auto& fib = bs.b->fiber(V2);
        std::size_t yb = bs.t.objects()[y].b;
        std::size_t qx = bs.b->pull(q, gj.b);
        Vec<K> c = bs.b->coherence(fv, q, ss.b_obj);
        for (std::size_t ib = 0; ib < bl.dim_b; ++ib) {
          Vec<K> bnew = fib.compose(yb, qx, bs.b->pull(base.compose(fv, q), ss.b_obj), c, unit_vector(k, bl.dim_b, ib));
          for (std::size_t ia = 0; ia < bl.dim_a; ++ia) {
            Vec<K> e = bs.t.element(y, t2, bl.p, base.identity(V2), bnew, unit_vector(k, bl.dim_a, ia));
            std::size_t col = off[j] + bl.offset + ib * bl.dim_a + ia;
            for (std::size_t r = 0; r < e.size(); ++r) h(off2[j2] + r, col) = e[r];
          }
        }
      }
    }
    return h;
  }
};

/// H_0 of Φ_!(B(k̲)) is P^fib through ε and H_i = 0 for 1 ≤ i ≤ max_deg.
template <class K>
CheckReport check_transported_bar(const SettingPtr<K>& s, int max_deg, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"transported-bar", std::move(instance)};
  const auto& base = s->base();
  for (std::size_t w = 0; w < base.num_objects(); ++w)
    for (std::size_t a = 0; a < s->a->fiber(w).num_objects(); ++a)
      for (std::size_t b = 0; b < s->b->fiber(w).num_objects(); ++b) {
        TransportedBar<K> tb(s, w, a, b, max_deg + 1);
        CheckCase c{"W=" + base.object_id(w) + " A=" + std::to_string(a) + " B=" + std::to_string(b), {}, true, {}};
        for (std::size_t y = 0; y < s->t.objects().size(); ++y) {
          Matrix<K> eps = tb.epsilon_at(y);
          Matrix<K> d1 = tb.d_at(1, y);
          std::size_t s0 = eps.cols();
          bool ok = (eps * d1).is_zero() && rank(eps) == tb.pfib.dim(y);
          std::size_t h0 = s0 - rank(d1);
          c.degrees[0].first += h0;
          c.degrees[0].second += tb.pfib.dim(y);
          if (!ok || h0 != tb.pfib.dim(y)) {
            c.pass = false;
            c.detail += "augmentation fails at " + s->t.category()->object_id(y) + "; ";
          }
          for (int i = 1; i <= max_deg; ++i) {
            Matrix<K> di = tb.d_at(i, y), dn = tb.d_at(i + 1, y);
            if (!(di * dn).is_zero()) {
              c.pass = false;
              c.detail += "d∘d ≠ 0; ";
            }
            std::size_t hi = di.cols() - rank(di) - rank(dn);
            c.degrees[i].first += hi;
            c.degrees[i].second += 0;
            if (hi != 0) c.pass = false;
          }
        }
        rep.add(std::move(c));
      }
  rep.millis = sw.millis();
  return rep;
}

/// ε h_{-1} = Id, ∂_0 h_n = Id and ∂_i h_n = h_{n-1} ∂_{i-1} on every component.
template <class K>
CheckReport check_homotopy_identities(const SettingPtr<K>& s, int max_deg, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"homotopy", std::move(instance)};
  const auto& base = s->base();
  const K& k = s->field();
  for (std::size_t w = 0; w < base.num_objects(); ++w)
    for (std::size_t a = 0; a < s->a->fiber(w).num_objects(); ++a)
      for (std::size_t b = 0; b < s->b->fiber(w).num_objects(); ++b) {
        TransportedBar<K> tb(s, w, a, b, max_deg + 1);
        CheckCase c{"W=" + base.object_id(w) + " A=" + std::to_string(a) + " B=" + std::to_string(b), {}, true, {}};
        auto fail = [&](const std::string& what, std::size_t y) {
          if (c.pass) c.detail = what + " at " + s->t.category()->object_id(y);
          c.pass = false;
        };
        for (std::size_t y = 0; y < s->t.objects().size(); ++y) {
          Matrix<K> hm = tb.h_minus_at(y);
          if (!(tb.epsilon_at(y) * hm == Matrix<K>::identity(k, tb.pfib.dim(y)))) fail("ε h_-1 ≠ Id", y);
          c.degrees[-1].first += 1;
          c.degrees[-1].second += 1;
          std::vector<Matrix<K>> h{hm};  // h[n + 1] = h_n
          for (int n = 0; n < max_deg + 1; ++n) {
            h.push_back(tb.h_at(n, y));
            const Matrix<K>& hn = h.back();
            if (!(tb.face_at(n + 1, 0, y) * hn == Matrix<K>::identity(k, hn.cols()))) fail("∂_0 h_" + std::to_string(n) + " ≠ Id", y);
            for (int i = 1; i <= n + 1; ++i)
              if (!(tb.face_at(n + 1, i, y) * hn == h[n] * tb.face_at(n, i - 1, y)))
                fail("∂_" + std::to_string(i) + " h_" + std::to_string(n) + " ≠ h ∂", y);
            c.degrees[n].first += 1;
            c.degrees[n].second += 1;
          }
        }
        if (!c.pass)
          for (auto& [i, v] : c.degrees) v.first = 0;
        rep.add(std::move(c));
      }
  rep.millis = sw.millis();
  return rep;
}

// -- collapse and flattening -------------------------------------------------

/// ā: all homs of a finite linear category as one algebra, with the
/// identities e_x as orthogonal idempotents summing to 1.
template <class K>
struct CollapsedAlgebra {
  LinearCategoryPtr<K> source;
  LinearCategoryPtr<K> algebra;
  std::vector<std::size_t> offsets;  // start of hom(x, y) at x * n + y
  std::vector<Vec<K>> idempotents;

  std::size_t dim() const { return algebra->hom_dim(0, 0); }
};

template <class K>
CollapsedAlgebra<K> bar_collapse(const LinearCategoryPtr<K>& c) {
  const K& k = c->field();
  const std::size_t n = c->num_objects();
  CollapsedAlgebra<K> out;
  out.source = c;
  std::size_t total = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pair_of;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      out.offsets.push_back(total);
      for (std::size_t i = 0; i < c->hom_dim(x, y); ++i) pair_of.emplace_back(x, y);
      total += c->hom_dim(x, y);
    }
  LinearCategory<K> alg(k, {"*"});
  alg.set_hom(0, 0, total);
  Vec<K> one(total, k.zero());
  for (std::size_t x = 0; x < n; ++x) {
    Vec<K> e(total, k.zero());
    Vec<K> id = c->identity(x);
    for (std::size_t i = 0; i < id.size(); ++i) e[out.offsets[x * n + x] + i] = id[i];
    for (std::size_t i = 0; i < total; ++i) one[i] = k.add(one[i], e[i]);
    out.idempotents.push_back(std::move(e));
  }
  alg.set_identity(0, to_sparse(k, one));
  alg.fill_products([&](std::size_t, std::size_t, std::size_t, std::size_t g, std::size_t f) -> Sparse<K> {
    auto [gx, gy] = pair_of[g];
    auto [fx, fy] = pair_of[f];
    if (fy != gx) return {};
    Sparse<K> out_s;
    for (const auto& [i, v] : c->product(fx, fy, gy, g - out.offsets[gx * n + gy], f - out.offsets[fx * n + fy]))
      out_s.emplace_back(out.offsets[fx * n + gy] + i, v);
    return out_s;
  });
  out.algebra = std::make_shared<const LinearCategory<K>>(std::move(alg));
  return out;
}

/// ⊕_x M(x) as a module over ā; f ∈ hom(x, y) acts by M(f) on the y-block.
template <class K>
FDModule<K> collapse_module(const CollapsedAlgebra<K>& ca, const FDModule<K>& m) {
  const auto& c = *ca.source;
  const std::size_t n = c.num_objects();
  std::vector<std::size_t> off{0};
  for (std::size_t x = 0; x < n; ++x) off.push_back(off.back() + m.dim(x));
  FDModule<K> out(ca.algebra, {off.back()});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
        Matrix<K> a(c.field(), off.back(), off.back());
        a.add_block(off[x], off[y], m.action(x, y, f), c.field().one());
        out.action(0, 0, ca.offsets[x * n + y] + f) = std::move(a);
      }
  return out;
}

/// The left inverse: M(x) is the image of e_x.
template <class K>
FDModule<K> uncollapse_module(const CollapsedAlgebra<K>& ca, const FDModule<K>& m) {
  const auto& c = *ca.source;
  const std::size_t n = c.num_objects();
  std::vector<Matrix<K>> basis;
  std::vector<std::size_t> dims;
  for (std::size_t x = 0; x < n; ++x) {
    basis.push_back(column_space_basis(m.act(0, 0, ca.idempotents[x])));
    dims.push_back(basis.back().cols());
  }
  FDModule<K> out(ca.source, dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
        if (dims[x] == 0 || dims[y] == 0) continue;
        Matrix<K> moved = m.action(0, 0, ca.offsets[x * n + y] + f) * basis[y];
        out.action(x, y, f) = solve_matrix(basis[x], moved);
      }
  return out;
}

/// ã for a graded category on a poset: objects (U, A), and
/// hom((V, B), (U, A)) = a_{V≤U}(B, A), zero unless V ≤ U.
template <class K>
struct Flattened {
  LinearCategoryPtr<K> cat;
  std::vector<std::pair<std::size_t, std::size_t>> objects;  // (base object, fiber object)
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
};

template <class K>
Flattened<K> tilde_flatten(const GradedCategory<K>& g) {
  const auto& base = g.base();
  if (!base.is_poset()) throw NotAPoset("the base category is not a poset");
  const auto& p = g.prestack();
  const K& k = p.field();
  Flattened<K> out;
  std::vector<std::string> ids;
  for (std::size_t u = 0; u < base.num_objects(); ++u)
    for (std::size_t a = 0; a < p.fiber(u).num_objects(); ++a) {
      out.index[{u, a}] = out.objects.size();
      out.objects.emplace_back(u, a);
      ids.push_back(base.object_id(u) + ":" + p.fiber(u).object_id(a));
    }
  const std::size_t n = out.objects.size();
  LinearCategory<K> c(k, ids);
  auto arrow = [&](std::size_t x, std::size_t y) -> std::optional<std::size_t> {
    auto h = base.hom(out.objects[x].first, out.objects[y].first);
    if (h.empty()) return std::nullopt;
    return h.front();
  };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      auto f = arrow(x, y);
      c.set_hom(x, y, f ? g.dim(*f, out.objects[x].second, out.objects[y].second) : 0);
    }
  for (std::size_t x = 0; x < n; ++x) c.set_identity(x, to_sparse(k, p.fiber(out.objects[x].first).identity(out.objects[x].second)));
  c.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t gi, std::size_t fi) {
    std::size_t f = *arrow(x, y), gg = *arrow(y, z);
    return to_sparse(k, g.compose(gg, f, out.objects[x].second, out.objects[y].second, out.objects[z].second,
                                  unit_vector(k, c.hom_dim(y, z), gi), unit_vector(k, c.hom_dim(x, y), fi)));
  });
  out.cat = std::make_shared<const LinearCategory<K>>(std::move(c));
  return out;
}

/// Bimodules over (c, d): objects (B, A) with B in d and A in c, and
/// hom((B', A'), (B, A)) = d(B', B) ⊗ c(A, A'), basis ib * dim_a + ia.
template <class K>
LinearCategoryPtr<K> envelope(const LinearCategoryPtr<K>& c, const LinearCategoryPtr<K>& d) {
  const K& k = c->field();
  const std::size_t nc = c->num_objects(), nd = d->num_objects();
  std::vector<std::string> ids;
  for (std::size_t b = 0; b < nd; ++b)
    for (std::size_t a = 0; a < nc; ++a) ids.push_back("(" + d->object_id(b) + "," + c->object_id(a) + ")");
  LinearCategory<K> e(k, ids);
  auto split = [&](std::size_t x) { return std::make_pair(x / nc, x % nc); };
  for (std::size_t s = 0; s < ids.size(); ++s)
    for (std::size_t t = 0; t < ids.size(); ++t) {
      auto [b1, a1] = split(s);
      auto [b2, a2] = split(t);
      e.set_hom(s, t, d->hom_dim(b1, b2) * c->hom_dim(a2, a1));
    }
  for (std::size_t s = 0; s < ids.size(); ++s) {
    auto [b, a] = split(s);
    Vec<K> v(d->hom_dim(b, b) * c->hom_dim(a, a), k.zero());
    add_tensor(k, v, 0, d->identity(b), c->identity(a), k.one());
    e.set_identity(s, to_sparse(k, v));
  }
  // (b ⊗ a) ∘ (b' ⊗ a') = (b ∘ b') ⊗ (a' ∘ a)
  e.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t gi, std::size_t fi) {
    auto [bx, ax] = split(x);
    auto [by, ay] = split(y);
    auto [bz, az] = split(z);
    std::size_t gda = c->hom_dim(az, ay), fda = c->hom_dim(ay, ax);
    Vec<K> bb = d->compose(bx, by, bz, unit_vector(k, d->hom_dim(by, bz), gi / gda), unit_vector(k, d->hom_dim(bx, by), fi / fda));
    Vec<K> aa = c->compose(az, ay, ax, unit_vector(k, fda, fi % fda), unit_vector(k, gda, gi % gda));
    Vec<K> out(d->hom_dim(bx, bz) * c->hom_dim(az, ax), k.zero());
    add_tensor(k, out, 0, bb, aa, k.one());
    return to_sparse(k, out);
  });
  return std::make_shared<const LinearCategory<K>>(std::move(e));
}

/// Extension by zero along a fully faithful functor that is injective on objects.
template <class K>
FDModule<K> extend_by_zero(const LinearFunctor<K>& f, const FDModule<K>& m) {
  const auto& tc = *f.target;
  const std::size_t n = f.source->num_objects();
  std::vector<std::size_t> pre(tc.num_objects(), n);
  for (std::size_t x = 0; x < n; ++x) pre[f.object_map[x]] = x;
  std::vector<std::size_t> dims(tc.num_objects(), 0);
  for (std::size_t z = 0; z < tc.num_objects(); ++z)
    if (pre[z] < n) dims[z] = m.dim(pre[z]);
  FDModule<K> out(f.target, dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t hd = f.source->hom_dim(x, y);
      if (hd == 0 || m.dim(x) == 0 || m.dim(y) == 0) continue;
      auto inv = inverse(f.map(x, y));
      if (!inv) throw MathError("functor is not fully faithful");
      for (std::size_t i = 0; i < hd; ++i) {
        Matrix<K> a(tc.field(), m.dim(x), m.dim(y));
        for (std::size_t j = 0; j < hd; ++j) a.add_block(0, 0, m.action(x, y, j), (*inv)(j, i));
        out.action(f.object_map[x], f.object_map[y], i) = std::move(a);
      }
    }
  return out;
}

/// Everything on the algebra side of the poset comparison.
template <class K>
struct PosetCollapse {
  Flattened<K> a_tilde, b_tilde;
  LinearCategoryPtr<K> env;
  LinearFunctor<K> embed;  // t -> env
  CollapsedAlgebra<K> collapsed;

  explicit PosetCollapse(const BimoduleSetting<K>& s)
      : a_tilde(tilde_flatten(s.t.a())), b_tilde(tilde_flatten(s.t.b())), env(envelope(a_tilde.cat, b_tilde.cat)), collapsed() {
    const auto& base = s.base();
    const std::size_t na = a_tilde.objects.size();
    embed = LinearFunctor<K>{s.t.category(), env, {}, {}};
    for (const auto& o : s.t.objects())
      embed.object_map.push_back(b_tilde.index.at({base.src(o.u), o.b}) * na + a_tilde.index.at({base.dst(o.u), o.a}));
    const std::size_t n = s.t.objects().size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        std::size_t hd = s.t.category()->hom_dim(x, y);
        Matrix<K> m(s.field(), env->hom_dim(embed.object_map[x], embed.object_map[y]), hd);
        for (std::size_t i = 0; i < hd; ++i) {
          auto [bl, ib, ia] = s.t.locate(x, y, i);
          m(ib * bl.dim_a + ia, i) = s.field().one();
        }
        embed.hom_matrix.push_back(std::move(m));
      }
    collapsed = bar_collapse(env);
  }

  FDModule<K> flatten(const FDModule<K>& graded) const { return extend_by_zero(embed, graded); }
  FDModule<K> bang(const FDModule<K>& flat) const { return collapse_module(collapsed, flat); }
};

/// A! for a prestack on a poset.
template <class K>
CollapsedAlgebra<K> bang(const PrestackPtr<K>& p) {
  return bar_collapse(tilde_flatten(grothendieck(p)).cat);
}

/// M! for a bimodule over r.
template <class K>
FDModule<K> bang_module(const BimoduleSetting<K>& s, const PosetCollapse<K>& pc, const FDModule<K>& m) {
  return pc.bang(pc.flatten(pi_star(s, m)));
}

/// Ext over r equals Ext of M! over the collapsed envelope, checked along
/// the whole composite and for each step on its own.
template <class K>
CheckReport check_collapse_chain(const BimoduleSetting<K>& s, const LabeledModules<K>& pairs_from, int max_deg, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"collapse-chain", std::move(instance)};
  if (!s.base().is_poset()) {
    rep.skipped = true;
    rep.reason = NotAPoset("the base category is not a poset").what();
    rep.millis = sw.millis();
    return rep;
  }
  PosetCollapse<K> pc(s);
  if (auto v = pc.embed.violation()) throw MathError("flattening embedding: " + *v);
  // one resolution per module and side; every pair reuses them
  struct Sides {
    FDModule<K> r, t, env, bang;
  };
  std::vector<Sides> sides;
  std::vector<std::array<Resolution<K>, 4>> res;
  for (const auto& [label, m] : pairs_from) {
    auto tm = pi_star(s, m);
    auto fm = pc.flatten(tm);
    sides.push_back({m, tm, fm, pc.bang(fm)});
    const auto& sd = sides.back();
    res.push_back({projective_resolution(sd.r, max_deg + 1), projective_resolution(sd.t, max_deg + 1),
                   projective_resolution(sd.env, max_deg + 1), projective_resolution(sd.bang, max_deg + 1)});
  }
  for (std::size_t i = 0; i < pairs_from.size(); ++i)
    for (std::size_t j = 0; j < pairs_from.size(); ++j) {
      std::string label = "(" + pairs_from[i].first + "," + pairs_from[j].first + ")";
      auto over_r = ext_dims(res[i][0], sides[j].r, max_deg);
      auto over_t = ext_dims(res[i][1], sides[j].t, max_deg);
      auto over_env = ext_dims(res[i][2], sides[j].env, max_deg);
      auto over_bang = ext_dims(res[i][3], sides[j].bang, max_deg);
      rep.add(compare_tables("ext-comparison " + label, over_r, over_t));
      rep.add(compare_tables("flatten " + label, over_t, over_env));
      rep.add(compare_tables("collapse " + label, over_env, over_bang));
      rep.add(compare_tables("composite " + label, over_r, over_bang));
    }
  rep.millis = sw.millis();
  return rep;
}

// -- Σ and the localization --------------------------------------------------

template <class K>
struct SigmaGenerator {
  std::size_t u, p, b, a;
  DeltaMap<K> map;
};

/// δ^l_p: P_{B,pu,A'} -> P_{B,u,p*A'} for every composable (p, u) with p not an identity.
template <class K>
std::vector<SigmaGenerator<K>> sigma_generators(const BimoduleSetting<K>& s) {
  const auto& base = s.base();
  std::vector<SigmaGenerator<K>> out;
  for (std::size_t u = 0; u < base.num_morphisms(); ++u)
    for (std::size_t p = 0; p < base.num_morphisms(); ++p) {
      if (!base.composable(p, u) || base.is_identity(p)) continue;
      for (std::size_t b = 0; b < s.b->fiber(base.src(u)).num_objects(); ++b)
        for (std::size_t a = 0; a < s.a->fiber(base.dst(p)).num_objects(); ++a) out.push_back({u, p, b, a, delta_l(s, p, u, b, a)});
    }
  return out;
}

/// Hom(σ, M) is M(element): M(target) -> M(source).
template <class K>
bool inverts_sigma(const std::vector<SigmaGenerator<K>>& sigma, const FDModule<K>& m) {
  for (const auto& g : sigma)
    if (!is_invertible(m.act(g.map.source, g.map.target, g.map.element))) return false;
  return true;
}

/// Π(σ) is an isomorphism of representables over r.
template <class K>
bool pi_inverts(const BimoduleSetting<K>& s, const SigmaGenerator<K>& g) {
  std::size_t x = s.pi.object_map[g.map.source], y = s.pi.object_map[g.map.target];
  Vec<K> e = s.pi.map(g.map.source, g.map.target).apply(g.map.element);
  const auto& rc = *s.r.category();
  for (std::size_t z = 0; z < rc.num_objects(); ++z)
    if (!is_invertible(rc.left_mult(z, x, y, e))) return false;
  return true;
}

/// Test set: Π* of seeded modules (fibered), seeded graded bimodules and
/// every representable over t.
template <class K>
LabeledModules<K> sigma_test_modules(const BimoduleSetting<K>& s, std::uint64_t seed, int count = 10) {
  LabeledModules<K> out;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count / 2; ++i) out.emplace_back("Pi*random" + std::to_string(i), pi_star(s, random_module(s.r.category(), rng, 2)));
  for (int i = count / 2; i < count; ++i) out.emplace_back("random" + std::to_string(i), random_module(s.t.category(), rng, 2));
  const auto& tc = s.t.category();
  for (std::size_t x = 0; x < tc->num_objects(); ++x) out.emplace_back("P" + tc->object_id(x), representable(tc, x));
  return out;
}

template <class K>
CheckReport check_sigma_characterization(const BimoduleSetting<K>& s, const LabeledModules<K>& mods, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"sigma", std::move(instance)};
  auto sigma = sigma_generators(s);
  for (const auto& [name, m] : mods) {
    bool inv = inverts_sigma(sigma, m), fib = is_fibered(s, m);
    CheckCase c{name, {}, inv == fib, inv ? "inverts Σ" : "does not invert Σ"};
    c.degrees[0] = {inv ? 1 : 0, fib ? 1 : 0};
    rep.add(std::move(c));
  }
  std::size_t good = 0;
  for (const auto& g : sigma) good += pi_inverts(s, g) ? 1 : 0;
  CheckCase c{"Pi(sigma) invertible", {}, good == sigma.size(), {}};
  c.degrees[0] = {good, sigma.size()};
  rep.add(std::move(c));
  rep.millis = sw.millis();
  return rep;
}

/// Tor^t_i(r, r) = 0 for 1 ≤ i ≤ max_deg and r ⊗_t r -> r is an isomorphism,
/// object pair by object pair.
template <class K>
CheckReport check_stably_flat(const BimoduleSetting<K>& s, int max_deg, std::string instance = {}) {
  Stopwatch sw;
  CheckReport rep{"stably-flat", std::move(instance)};
  const auto& rc = s.r.category();
  const K& k = s.field();
  const std::size_t n = rc->num_objects();
  for (std::size_t r2 = 0; r2 < n; ++r2) {
    auto right = pi_star(s, representable(rc, r2));
    auto res = projective_resolution(right, max_deg + 1);
    for (std::size_t r1 = 0; r1 < n; ++r1) {
      auto left = restrict_along(s.pi_op, representable(s.r_op, r1));
      auto tor = homology_dims(tensor_complex(res, left, max_deg + 1), 0, max_deg);
      DimTable expect;
      expect[0] = rc->hom_dim(r1, r2);
      for (int i = 1; i <= max_deg; ++i) expect[i] = 0;
      CheckCase c = compare_tables(rc->object_id(r1) + "->" + rc->object_id(r2), tor, expect);
      // multiplication m ⊗ l ↦ m ∘ l
      auto pres = tensor_over(right, left);
      Matrix<K> mu(k, rc->hom_dim(r1, r2), pres.total());
      for (std::size_t x = 0; x < s.t.objects().size(); ++x) {
        std::size_t px = s.pi.object_map[x];
        for (std::size_t i = 0; i < right.dim(x); ++i)
          for (std::size_t j = 0; j < left.dim(x); ++j) {
            Vec<K> v = rc->compose(r1, px, r2, unit_vector(k, right.dim(x), i), unit_vector(k, left.dim(x), j));
            for (std::size_t r = 0; r < v.size(); ++r) mu(r, pres.offsets[x] + i * left.dim(x) + j) = v[r];
          }
      }
      bool iso = (mu * pres.relations).is_zero() && rank(mu) == rc->hom_dim(r1, r2) && pres.dim() == rc->hom_dim(r1, r2);
      if (!iso) {
        c.pass = false;
        c.detail = "multiplication is not an isomorphism";
      }
      rep.add(std::move(c));
    }
  }
  rep.millis = sw.millis();
  return rep;
}

}  // namespace cct
