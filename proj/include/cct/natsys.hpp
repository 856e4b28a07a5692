#pragma once

// Natural systems on a finite category (modules over Fact), the bar
// resolution of the constant system and natural system cohomology, and the
// comparison functors between bimodules and natural systems on a slice.

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cct/category.hpp"
#include "cct/prestack.hpp"
#include "cct/resolution.hpp"

namespace cct {

/// A natural system N is covariant on Fact(C); we store it as a right module
/// over lin(Fact(C)^op), so the Fact morphism m: u -> u' acts N(u) -> N(u').
template <class K>
struct NatSetting {
  FiniteCategory cat;
  FactCategory fact;
  LinearCategoryPtr<K> lin;       // lin(C)
  LinearCategoryPtr<K> fact_lin;  // lin(Fact(C)^op)

  NatSetting(const K& k, FiniteCategory c) : cat(std::move(c)), fact(cat.fact()) {
    lin = std::make_shared<const LinearCategory<K>>(LinearCategory<K>::linearize(k, cat));
    fact_lin = std::make_shared<const LinearCategory<K>>(LinearCategory<K>::linearize(k, fact.category.opposite()));
  }

  const K& field() const { return lin->field(); }
  std::size_t object_of(std::size_t u) const { return fact.object_of_arrow.at(u); }

  /// The Fact morphism u -> puq as an element of lin(Fact^op)(puq, u).
  Vec<K> element(std::size_t u, std::size_t p, std::size_t q) const {
    std::size_t m = fact.morphism_of(u, p, q);
    std::size_t x = fact.category.dst(m), y = fact.category.src(m);
    return unit_vector(field(), fact_lin->hom_dim(x, y), linear_basis_index(fact.category, m));
  }
};

/// The Fact morphism behind the basis element i of lin(Fact^op)(x, y).
template <class K>
std::size_t fact_morphism(const NatSetting<K>& ns, std::size_t x, std::size_t y, std::size_t i) {
  return ns.fact.category.hom(y, x).at(i);
}

/// k̲ scaled up: every N(u) = k^d and every morphism acts by the identity.
template <class K>
FDModule<K> constant_system(const NatSetting<K>& ns, std::size_t d = 1) {
  const auto& c = *ns.fact_lin;
  FDModule<K> m(ns.fact_lin, std::vector<std::size_t>(c.num_objects(), d));
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) m.action(x, y, f) = Matrix<K>::identity(ns.field(), d);
  return m;
}

/// (IF)(u) = F(source of u); (p, q) acts by F(q).
template <class K>
FDModule<K> include_presheaf(const NatSetting<K>& ns, const FDModule<K>& f) {
  const auto& c = *ns.fact_lin;
  const auto& base = ns.cat;
  std::vector<std::size_t> dims;
  for (std::size_t x = 0; x < c.num_objects(); ++x) dims.push_back(f.dim(base.src(ns.fact.object_arrow[x])));
  FDModule<K> out(ns.fact_lin, dims);
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t i = 0; i < c.hom_dim(x, y); ++i) {
        std::size_t q = ns.fact.morphism_pq[fact_morphism(ns, x, y, i)].second;
        out.action(x, y, i) = f.action(base.src(q), base.dst(q), linear_basis_index(base, q));
      }
  return out;
}

/// Bar resolution of k̲: B_n = ⊕_{v ∈ N_n} P_{|v|}, d = Σ (-1)^i ∂_i where
/// ∂_i comes from the Fact morphism |∂_i v| -> |v|. The normalized variant
/// drops degenerate chains.
template <class K>
struct BarComplex {
  std::vector<std::vector<NerveChain>> chains;
  std::vector<std::map<std::pair<std::vector<std::size_t>, std::size_t>, std::size_t>> index;
  Resolution<K> res;

  std::optional<std::size_t> find(int n, const NerveChain& v) const {
    auto it = index[n].find({v.arrows, v.object});
    if (it == index[n].end()) return std::nullopt;
    return it->second;
  }
};

/// Generator images of the single face ∂_i: B_n -> B_{n-1}, unsigned. Faces
/// that land on a dropped degenerate chain are zero.
template <class K>
std::vector<Vec<K>> bar_face_images(const NatSetting<K>& ns, const BarComplex<K>& bar, int n, int i) {
  const K& k = ns.field();
  const auto& c = ns.cat;
  const auto& lower = bar.res.terms[n - 1];
  std::vector<Vec<K>> images;
  for (std::size_t j = 0; j < bar.chains[n].size(); ++j) {
    auto off = lower.offsets(bar.res.terms[n].gens[j]);
    Vec<K> img(off.back(), k.zero());
    NerveFace face = c.face(bar.chains[n][j], i);
    if (auto t = bar.find(n - 1, face.chain)) {
      Vec<K> e = ns.element(c.composite(face.chain), face.p, face.q);
      std::copy(e.begin(), e.end(), img.begin() + static_cast<std::ptrdiff_t>(off[*t]));
    }
    images.push_back(std::move(img));
  }
  return images;
}

template <class K>
BarComplex<K> bar_resolution(const NatSetting<K>& ns, int top, bool normalized = false, int cap = kDefaultNerveCap) {
  const K& k = ns.field();
  const auto& c = ns.cat;
  BarComplex<K> out;
  out.index.resize(top + 1);
  for (int n = 0; n <= top; ++n) {
    out.chains.push_back(normalized ? c.normalized_nerve(n, cap) : c.nerve(n, cap));
    FreeModule<K> f{ns.fact_lin, {}};
    for (std::size_t j = 0; j < out.chains[n].size(); ++j) {
      const auto& v = out.chains[n][j];
      f.gens.push_back(ns.object_of(c.composite(v)));
      out.index[n][{v.arrows, v.object}] = j;
    }
    out.res.terms.push_back(std::move(f));
  }
  for (std::size_t j = 0; j < out.res.terms[0].gens.size(); ++j) out.res.augmentation.push_back({k.one()});
  for (int n = 1; n <= top; ++n) {
    std::vector<Vec<K>> total;
    for (int i = 0; i <= n; ++i) {
      auto face = bar_face_images(ns, out, n, i);
      if (total.empty()) {
        total = std::move(face);
        continue;
      }
      auto sign = (i % 2 == 0) ? k.one() : k.neg(k.one());
      for (std::size_t j = 0; j < total.size(); ++j)
        for (std::size_t t = 0; t < total[j].size(); ++t) k.add_mul(total[j][t], sign, face[j][t]);
    }
    out.res.differentials.push_back(std::move(total));
  }
  return out;
}

/// H^n_BW(C; N) for n = 0..max_deg.
template <class K>
std::map<int, std::size_t> natural_system_cohomology(const NatSetting<K>& ns, const FDModule<K>& n, int max_deg, bool normalized = false,
                                          int cap = kDefaultNerveCap) {
  if (max_deg + 1 > cap) throw CapExceeded(max_deg + 1, cap);
  return ext_dims(bar_resolution(ns, max_deg + 1, normalized, cap).res, n, max_deg);
}

/// Both sides of H*_BW(C; IF) = Ext*(k̲, F).
template <class K>
std::pair<std::map<int, std::size_t>, std::map<int, std::size_t>> presheaf_comparison(const NatSetting<K>& ns, const FDModule<K>& f,
                                                                                      int max_deg) {
  const auto& c = *ns.lin;
  FDModule<K> unit(ns.lin, std::vector<std::size_t>(c.num_objects(), 1));
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t i = 0; i < c.hom_dim(x, y); ++i) unit.action(x, y, i) = Matrix<K>::identity(ns.field(), 1);
  return {natural_system_cohomology(ns, include_presheaf(ns, f), max_deg), ext_dims(unit, f, max_deg)};
}

// -- slices ----------------------------------------------------------------

/// The slice U/W with its natural-system machinery and the pair (A, B).
template <class K>
struct SliceSetting {
  std::shared_ptr<const BimoduleSetting<K>> bs;
  SliceCategory slice;
  NatSetting<K> ns;
  std::size_t apex, a_obj, b_obj;

  SliceSetting(std::shared_ptr<const BimoduleSetting<K>> s, std::size_t w, std::size_t a, std::size_t b)
      : bs(s), slice(s->base().slice(w)), ns(s->field(), slice.category), apex(w), a_obj(a), b_obj(b) {
    if (a >= s->a->fiber(w).num_objects() || b >= s->b->fiber(w).num_objects()) throw UnknownObject("fiber object out of range");
  }

  /// Base morphism of the Fact(U/W) object x, and the arrow to W below its target.
  std::size_t arrow(std::size_t x) const { return slice.morphism_arrow[ns.fact.object_arrow[x]]; }
  std::size_t structure(std::size_t x) const {
    return slice.object_arrow[slice.category.dst(ns.fact.object_arrow[x])];
  }
  /// G(u, f) = ((fu)*B, u, f*A) in t.
  std::size_t g_object(std::size_t x) const {
    const auto& base = bs->base();
    std::size_t u = arrow(x), f = structure(x);
    return bs->t.object_of(bs->b->pull(base.compose(f, u), b_obj), u, bs->a->pull(f, a_obj));
  }
};

/// G: lin(Fact(U/W)^op) -> t. The Fact morphism (p, q): u -> u' goes to
/// c^{-1}_{fu,q,B} ⊗ c^{-1}_{f',p,A} in t(G(u'), G(u)).
template <class K>
LinearFunctor<K> phi_functor(const SliceSetting<K>& ss) {
  const auto& s = *ss.bs;
  const auto& base = s.base();
  const auto& sl = ss.slice;
  const auto& fc = *ss.ns.fact_lin;
  const std::size_t n = fc.num_objects();
  LinearFunctor<K> g{ss.ns.fact_lin, s.t.category(), {}, {}};
  for (std::size_t x = 0; x < n; ++x) g.object_map.push_back(ss.g_object(x));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      // x = u', y = u
      Matrix<K> mat(s.field(), s.t.category()->hom_dim(g.object_map[x], g.object_map[y]), fc.hom_dim(x, y));
      for (std::size_t i = 0; i < fc.hom_dim(x, y); ++i) {
        auto [sp, sq] = ss.ns.fact.morphism_pq[fact_morphism(ss.ns, x, y, i)];
        std::size_t p = sl.morphism_arrow[sp], q = sl.morphism_arrow[sq];
        std::size_t u = ss.arrow(y), f = ss.structure(y), f2 = ss.structure(x);
        Vec<K> bv = s.b->coherence_inverse(base.compose(f, u), q, ss.b_obj);
        Vec<K> av = s.a->coherence_inverse(f2, p, ss.a_obj);
        mat.set_column(i, s.t.element(g.object_map[x], g.object_map[y], p, q, bv, av));
      }
      g.hom_matrix.push_back(std::move(mat));
    }
  return g;
}

/// Φ*_{A,B}(M)(u) = M_u((fu)*B, f*A).
template <class K>
FDModule<K> phi_star(const SliceSetting<K>& ss, const FDModule<K>& m) {
  return restrict_along(phi_functor(ss), m);
}

/// Ψ*_{A,B}(M)(g) = M_{1_V}(g*B, g*A); a slice morphism v: gv -> g acts by
/// right multiplication with δ_{v,g*B}, the inverse of the fibered
/// isomorphism and the coherence correction at 1_{V'}.
template <class K>
FDModule<K> psi_star(const SliceSetting<K>& ss, const FDModule<K>& m) {
  const auto& s = *ss.bs;
  if (!is_fibered(s, m)) throw NotFibered("bimodule is not fibered");
  const auto& base = s.base();
  const auto& sl = ss.slice;
  const auto& c = *ss.ns.lin;
  const std::size_t n = c.num_objects();
  auto at = [&](std::size_t x) {
    std::size_t g = sl.object_arrow[x];
    return s.t.object_of(s.b->pull(g, ss.b_obj), base.identity(base.src(g)), s.a->pull(g, ss.a_obj));
  };
  std::vector<std::size_t> dims;
  for (std::size_t x = 0; x < n; ++x) dims.push_back(m.dim(at(x)));
  FDModule<K> out(ss.ns.lin, dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t i = 0; i < c.hom_dim(x, y); ++i) {
        std::size_t v = sl.morphism_arrow[sl.category.hom(x, y)[i]];
        std::size_t g = sl.object_arrow[y];
        std::size_t gb = s.b->pull(g, ss.b_obj), ga = s.a->pull(g, ss.a_obj);
        std::size_t one = base.identity(base.src(v));
        auto [r1, r2, re] = s.right_cleavage(v, base.identity(base.src(g)), gb, ga);
        auto [l1, l2, le] = s.left_cleavage(v, one, s.b->pull(v, gb), ga);
        Matrix<K> linv = *inverse(m.act(l1, l2, le));
        Vec<K> bv = s.b->coherence_inverse(g, v, ss.b_obj);
        Vec<K> av = s.a->coherence(g, v, ss.a_obj);
        Vec<K> e = s.t.element(at(x), l2, one, one, bv, av);
        out.action(x, y, i) = m.act(at(x), l2, e) * linv * m.act(r1, r2, re);
      }
  return out;
}

/// J_W: lin(U/W) -> r, g ↦ (g*B, V, g*A), v ↦ (c_{g,v,A}, c^{-1}_{g,v,B}) over v.
template <class K>
LinearFunctor<K> j_functor(const SliceSetting<K>& ss) {
  const auto& s = *ss.bs;
  const auto& base = s.base();
  const auto& sl = ss.slice;
  const auto& c = *ss.ns.lin;
  const std::size_t n = c.num_objects();
  LinearFunctor<K> j{ss.ns.lin, s.r.category(), {}, {}};
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t g = sl.object_arrow[x];
    j.object_map.push_back(s.r.object_of(s.b->pull(g, ss.b_obj), base.src(g), s.a->pull(g, ss.a_obj)));
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Matrix<K> mat(s.field(), s.r.category()->hom_dim(j.object_map[x], j.object_map[y]), c.hom_dim(x, y));
      for (std::size_t i = 0; i < c.hom_dim(x, y); ++i) {
        std::size_t v = sl.morphism_arrow[sl.category.hom(x, y)[i]];
        std::size_t g = sl.object_arrow[y];
        mat.set_column(i, s.r.element(j.object_map[x], j.object_map[y], v, s.a->coherence(g, v, ss.a_obj),
                                   s.b->coherence_inverse(g, v, ss.b_obj)));
      }
      j.hom_matrix.push_back(std::move(mat));
    }
  return j;
}

/// θ: I Ψ* M -> Φ* M, at (u, f) the action of id ⊗ c^{-1}_{f,u,A} in block (u, 1_V).
template <class K>
ModuleMap<K> slice_restriction_iso(const SliceSetting<K>& ss, const FDModule<K>& m) {
  const auto& s = *ss.bs;
  const auto& base = s.base();
  ModuleMap<K> theta;
  for (std::size_t x = 0; x < ss.ns.fact_lin->num_objects(); ++x) {
    std::size_t u = ss.arrow(x), f = ss.structure(x);
    std::size_t fu = base.compose(f, u);
    std::size_t bo = s.b->pull(fu, ss.b_obj);
    std::size_t here = ss.g_object(x);
    std::size_t there = s.t.object_of(bo, base.identity(base.src(u)), s.a->pull(fu, ss.a_obj));
    Vec<K> e = s.t.element(here, there, u, base.identity(base.src(u)), s.b->fiber(base.src(u)).identity(bo),
                           s.a->coherence_inverse(f, u, ss.a_obj));
    theta.components.push_back(m.act(here, there, e));
  }
  return theta;
}

/// Generator images of a map between free modules, pushed along a linear
/// functor block by block.
template <class K>
std::vector<Vec<K>> push_images(const LinearFunctor<K>& g, const FreeModule<K>& src, const FreeModule<K>& dst,
                                const std::vector<Vec<K>>& images) {
  const K& k = g.target->field();
  FreeModule<K> moved_dst{g.target, {}};
  for (std::size_t x : dst.gens) moved_dst.gens.push_back(g.object_map[x]);
  std::vector<Vec<K>> out;
  for (std::size_t j = 0; j < src.gens.size(); ++j) {
    const std::size_t x = src.gens[j];
    auto off = dst.offsets(x);
    auto off2 = moved_dst.offsets(g.object_map[x]);
    Vec<K> img(off2.back(), k.zero());
    for (std::size_t t = 0; t < dst.gens.size(); ++t) {
      Vec<K> part(images[j].begin() + static_cast<std::ptrdiff_t>(off[t]), images[j].begin() + static_cast<std::ptrdiff_t>(off[t + 1]));
      Vec<K> moved = g.map(x, dst.gens[t]).apply(part);
      std::copy(moved.begin(), moved.end(), img.begin() + static_cast<std::ptrdiff_t>(off2[t]));
    }
    out.push_back(std::move(img));
  }
  return out;
}

/// Pushes a complex of free modules along a linear functor. The
/// augmentation is dropped.
template <class K>
Resolution<K> induce(const LinearFunctor<K>& g, const Resolution<K>& r) {
  Resolution<K> out;
  for (const auto& term : r.terms) {
    FreeModule<K> f{g.target, {}};
    for (std::size_t x : term.gens) f.gens.push_back(g.object_map[x]);
    out.terms.push_back(std::move(f));
  }
  for (std::size_t n = 0; n < r.differentials.size(); ++n)
    out.differentials.push_back(push_images(g, r.terms[n + 1], r.terms[n], r.differentials[n]));
  return out;
}

/// Φ_!(B(k̲)) over t, with the chains of U/W that index its summands.
template <class K>
BarComplex<K> phi_shriek_on_bar(const SliceSetting<K>& ss, int top, bool normalized = false, int cap = kDefaultNerveCap) {
  BarComplex<K> bar = bar_resolution(ss.ns, top, normalized, cap);
  bar.res = induce(phi_functor(ss), bar.res);
  return bar;
}

}  // namespace cct
