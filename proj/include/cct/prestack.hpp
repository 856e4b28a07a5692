#pragma once

// Linear prestacks on a finite base, the graded category of a prestack, and
// the linear categories t and r that carry graded and prestack bimodules.
//
// Conventions: for u: V -> U the restriction u* goes from A(U) to A(V). The
// coherence c_{u,v,A}: v*u*A -> (uv)*A lives in A(W) for v: W -> V. Entries
// not stored are identities.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cct/category.hpp"
#include "cct/errors.hpp"
#include "cct/linear_category.hpp"
#include "cct/matrix.hpp"
#include "cct/module.hpp"

namespace cct {

template <class K>
void add_tensor(const K& k, Vec<K>& out, std::size_t offset, const Vec<K>& left, const Vec<K>& right, const typename K::value_type& scale) {
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (k.is_zero(left[i])) continue;
    auto li = k.mul(scale, left[i]);
    for (std::size_t j = 0; j < right.size(); ++j)
      if (!k.is_zero(right[j])) k.add_mul(out[offset + i * right.size() + j], li, right[j]);
  }
}

template <class K>
class Prestack {
 public:
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;

  Prestack() = default;
  Prestack(K field, FiniteCategory base) : field_(std::move(field)), base_(std::move(base)) {
    fibers_.resize(base_.num_objects());
    restrictions_.resize(base_.num_morphisms());
  }

  /// Every fiber is `fiber` and every restriction is the identity.
  static Prestack constant(const FiniteCategory& base, const LinearCategoryPtr<K>& fiber) {
    Prestack p(fiber->field(), base);
    for (auto& f : p.fibers_) f = fiber;
    for (auto& r : p.restrictions_) r = LinearFunctor<K>::identity(fiber);
    return p;
  }
  static Prestack constant(const K& k, const FiniteCategory& base) {
    LinearCategory<K> one(k, {"*"});
    one.set_hom(0, 0, 1);
    one.set_identity(0, {{0, k.one()}});
    one.fill_products([&](std::size_t, std::size_t, std::size_t, std::size_t, std::size_t) { return Sparse<K>{{0, k.one()}}; });
    return constant(base, std::make_shared<const LinearCategory<K>>(std::move(one)));
  }

  void set_fiber(std::size_t u, LinearCategoryPtr<K> f) { fibers_.at(u) = std::move(f); }
  void set_restriction(std::size_t u, LinearFunctor<K> f) { restrictions_.at(u) = std::move(f); }
  void set_coherence(std::size_t u, std::size_t v, std::size_t a, Vec<K> c) {
    coherence_[{u, v, a}] = std::move(c);
    inverse_cache_.clear();
  }

  const K& field() const { return field_; }
  const FiniteCategory& base() const { return base_; }
  const LinearCategory<K>& fiber(std::size_t x) const { return *fibers_.at(x); }
  const LinearCategoryPtr<K>& fiber_ptr(std::size_t x) const { return fibers_.at(x); }
  const LinearFunctor<K>& restriction(std::size_t u) const { return restrictions_.at(u); }
  const std::map<Key, Vec<K>>& coherence_entries() const { return coherence_; }

  /// u*A
  std::size_t pull(std::size_t u, std::size_t a) const { return restrictions_[u].object_map[a]; }
  /// u*(f) for f in A(U)(a, b)
  Vec<K> pull(std::size_t u, std::size_t a, std::size_t b, const Vec<K>& f) const { return restrictions_[u].map(a, b).apply(f); }

  /// c_{u,v,A}: v*u*A -> (uv)*A
  Vec<K> coherence(std::size_t u, std::size_t v, std::size_t a) const {
    auto it = coherence_.find({u, v, a});
    if (it != coherence_.end()) return it->second;
    std::size_t uv = base_.compose(u, v);
    return fiber(base_.src(v)).identity(pull(uv, a));
  }
  Vec<K> coherence_inverse(std::size_t u, std::size_t v, std::size_t a) const {
    auto it = coherence_.find({u, v, a});
    if (it == coherence_.end()) return coherence(u, v, a);
    auto c = inverse_cache_.find({u, v, a});
    if (c != inverse_cache_.end()) return c->second;
    const auto& f = fiber(base_.src(v));
    auto inv = f.inverse_of(pull(v, pull(u, a)), pull(base_.compose(u, v), a), it->second);
    if (!inv) throw MathError("coherence is not invertible");
    inverse_cache_[{u, v, a}] = *inv;
    return *inv;
  }

  std::optional<CategoryViolation> violation() const {
    if (auto v = base_.violation()) return v;
    const std::size_t nm = base_.num_morphisms();
    const auto& mid = [&](std::size_t u) { return base_.morphism(u).id; };
    for (std::size_t x = 0; x < base_.num_objects(); ++x) {
      if (!fibers_[x]) return CategoryViolation{"/fibers/" + base_.object_id(x), "fiber", "missing"};
      if (auto v = fibers_[x]->violation()) return CategoryViolation{"/fibers/" + base_.object_id(x), "fiber", *v};
    }
    for (std::size_t u = 0; u < nm; ++u) {
      const auto& r = restrictions_[u];
      std::string path = "/restrictions/" + mid(u);
      const auto& s = fiber(base_.dst(u));
      const auto& t = fiber(base_.src(u));
      if (!r.source || !r.target || !same_shape(*r.source, s) || !same_shape(*r.target, t))
        return CategoryViolation{path, "restriction", "functor does not go from the fiber over the target to the fiber over the source"};
      if (r.object_map.size() != s.num_objects() || r.hom_matrix.size() != s.num_objects() * s.num_objects())
        return CategoryViolation{path, "restriction", "wrong number of components"};
      for (std::size_t a = 0; a < s.num_objects(); ++a) {
        if (r.object_map[a] >= t.num_objects()) return CategoryViolation{path, "restriction", "object image out of range"};
        for (std::size_t b = 0; b < s.num_objects(); ++b) {
          const auto& m = r.hom_matrix[a * s.num_objects() + b];
          if (m.cols() != s.hom_dim(a, b) || m.rows() != t.hom_dim(r.object_map[a], r.object_map[b]))
            return CategoryViolation{path, "restriction", "hom matrix has the wrong shape"};
        }
      }
      if (auto v = r.violation()) return CategoryViolation{path, "restriction", *v};
      if (base_.is_identity(u)) {
        for (std::size_t a = 0; a < s.num_objects(); ++a) {
          if (r.object_map[a] != a) return CategoryViolation{path, "normalization", "identity restriction moves an object"};
          for (std::size_t b = 0; b < s.num_objects(); ++b)
            if (!r.hom_matrix[a * s.num_objects() + b].is_identity()) return CategoryViolation{path, "normalization", "identity restriction is not the identity on homs"};
        }
      }
    }
    for (const auto& [key, c] : coherence_) {
      auto [u, v, a] = key;
      std::string path = "/coherence/" + (u < nm ? mid(u) : "?") + "," + (v < nm ? mid(v) : "?");
      if (u >= nm || v >= nm || !base_.composable(u, v) || a >= fiber(base_.dst(u)).num_objects())
        return CategoryViolation{path, "coherence", "entry does not name a composable pair and an object"};
      const auto& f = fiber(base_.src(v));
      if (c.size() != f.hom_dim(pull(v, pull(u, a)), pull(base_.compose(u, v), a)))
        return CategoryViolation{path, "coherence", "component has the wrong length"};
    }
    for (std::size_t u = 0; u < nm; ++u)
      for (std::size_t v = 0; v < nm; ++v) {
        if (!base_.composable(u, v)) continue;
        std::size_t uv = base_.compose(u, v);
        const auto& fw = fiber(base_.src(v));
        std::string path = "/coherence/" + mid(u) + "," + mid(v);
        for (std::size_t a = 0; a < fiber(base_.dst(u)).num_objects(); ++a) {
          std::size_t from = pull(v, pull(u, a)), to = pull(uv, a);
          bool stored = coherence_.count({u, v, a}) > 0;
          if (!stored && from != to) return CategoryViolation{path, "coherence", "missing component between distinct objects"};
          Vec<K> c = coherence(u, v, a);
          if ((base_.is_identity(u) || base_.is_identity(v)) && c != fw.identity(to))
            return CategoryViolation{path, "normalization", "coherence at an identity is not the identity"};
          if (!fw.inverse_of(from, to, c)) return CategoryViolation{path, "invertibility", "coherence component is not invertible"};
        }
        // naturality: c_{A'} ∘ v*u*(f) = (uv)*(f) ∘ c_A
        const auto& fu = fiber(base_.dst(u));
        for (std::size_t a = 0; a < fu.num_objects(); ++a)
          for (std::size_t b = 0; b < fu.num_objects(); ++b)
            for (std::size_t i = 0; i < fu.hom_dim(a, b); ++i) {
              Vec<K> f = unit_vector(field_, fu.hom_dim(a, b), i);
              std::size_t ua = pull(u, a), ub = pull(u, b);
              Vec<K> lhs = fw.compose(pull(v, ua), pull(v, ub), pull(uv, b), coherence(u, v, b), pull(v, ua, ub, pull(u, a, b, f)));
              Vec<K> rhs = fw.compose(pull(v, ua), pull(uv, a), pull(uv, b), pull(uv, a, b, f), coherence(u, v, a));
              if (lhs != rhs) return CategoryViolation{path, "naturality", "fails on basis " + std::to_string(i) + " of (" + fu.object_id(a) + ", " + fu.object_id(b) + ")"};
            }
      }
    // cocycle: c_{uv,w} ∘ w*(c_{u,v}) = c_{u,vw} ∘ c_{v,w,u*A} for X -w-> W -v-> V -u-> U
    for (std::size_t u = 0; u < nm; ++u)
      for (std::size_t v = 0; v < nm; ++v) {
        if (!base_.composable(u, v)) continue;
        for (std::size_t w = 0; w < nm; ++w) {
          if (!base_.composable(v, w)) continue;
          std::size_t uv = base_.compose(u, v), vw = base_.compose(v, w), uvw = base_.compose(uv, w);
          const auto& fx = fiber(base_.src(w));
          for (std::size_t a = 0; a < fiber(base_.dst(u)).num_objects(); ++a) {
            std::size_t ua = pull(u, a), vua = pull(v, ua), wvua = pull(w, vua);
            Vec<K> lhs = fx.compose(wvua, pull(w, pull(uv, a)), pull(uvw, a), coherence(uv, w, a), pull(w, vua, pull(uv, a), coherence(u, v, a)));
            Vec<K> rhs = fx.compose(wvua, pull(vw, ua), pull(uvw, a), coherence(u, vw, a), coherence(v, w, ua));
            if (lhs != rhs)
              return CategoryViolation{"/coherence/" + mid(u) + "," + mid(v) + "," + mid(w), "cocycle",
                                       "fails at object '" + fiber(base_.dst(u)).object_id(a) + "'"};
          }
        }
      }
    return std::nullopt;
  }

  void validate(const std::string& prefix = "prestack") const {
    if (auto v = violation()) throw ValidationError(prefix + v->path, v->axiom, v->detail);
  }

 private:
  static bool same_shape(const LinearCategory<K>& a, const LinearCategory<K>& b) {
    if (&a == &b) return true;
    if (a.num_objects() != b.num_objects()) return false;
    for (std::size_t x = 0; x < a.num_objects(); ++x)
      for (std::size_t y = 0; y < a.num_objects(); ++y)
        if (a.hom_dim(x, y) != b.hom_dim(x, y)) return false;
    return true;
  }

  K field_{};
  FiniteCategory base_;
  std::vector<LinearCategoryPtr<K>> fibers_;
  std::vector<LinearFunctor<K>> restrictions_;
  std::map<Key, Vec<K>> coherence_;
  mutable std::map<Key, Vec<K>> inverse_cache_;
};

template <class K>
using PrestackPtr = std::shared_ptr<const Prestack<K>>;

/// The graded category of a prestack: a_f(A, B) = A(U)(A, f*B) for f: U -> V,
/// with the identities of f*B as cleavage.
template <class K>
class GradedCategory {
 public:
  explicit GradedCategory(PrestackPtr<K> p) : p_(std::move(p)) {}

  const Prestack<K>& prestack() const { return *p_; }
  const PrestackPtr<K>& prestack_ptr() const { return p_; }
  const FiniteCategory& base() const { return p_->base(); }

  std::size_t dim(std::size_t f, std::size_t a, std::size_t b) const { return p_->fiber(base().src(f)).hom_dim(a, p_->pull(f, b)); }

  /// y·x for x in a_f(A, B) and y in a_g(B, C): c_{g,f,C} ∘ f*(y) ∘ x.
  Vec<K> compose(std::size_t g, std::size_t f, std::size_t a, std::size_t b, std::size_t c, const Vec<K>& y, const Vec<K>& x) const {
    const auto& fu = p_->fiber(base().src(f));
    std::size_t gc = p_->pull(g, c), fgc = p_->pull(f, gc), gfc = p_->pull(base().compose(g, f), c);
    Vec<K> fy = p_->pull(f, b, gc, y);
    Vec<K> t = fu.compose(a, p_->pull(f, b), fgc, fy, x);
    return fu.compose(a, fgc, gfc, p_->coherence(g, f, c), t);
  }

  /// δ_{f,B} in a_f(f*B, B).
  Vec<K> cleavage(std::size_t f, std::size_t b) const { return p_->fiber(base().src(f)).identity(p_->pull(f, b)); }

  /// Graded associativity and units on basis triples, then cartesianness of
  /// the cleavage.
  std::optional<std::string> violation() const {
    const auto& bc = base();
    const K& k = p_->field();
    const std::size_t nm = bc.num_morphisms();
    auto objs = [&](std::size_t x) { return p_->fiber(x).num_objects(); };
    for (std::size_t f = 0; f < nm; ++f)
      for (std::size_t a = 0; a < objs(bc.src(f)); ++a)
        for (std::size_t b = 0; b < objs(bc.dst(f)); ++b)
          for (std::size_t i = 0; i < dim(f, a, b); ++i) {
            Vec<K> x = unit_vector(k, dim(f, a, b), i);
            std::size_t ls = bc.identity(bc.dst(f)), rs = bc.identity(bc.src(f));
            if (compose(ls, f, a, b, b, p_->fiber(bc.dst(f)).identity(b), x) != x) return std::string("left unit fails");
            if (compose(f, rs, a, a, b, x, p_->fiber(bc.src(f)).identity(a)) != x) return std::string("right unit fails");
          }
    for (std::size_t f = 0; f < nm; ++f)
      for (std::size_t g = 0; g < nm; ++g) {
        if (!bc.composable(g, f)) continue;
        for (std::size_t h = 0; h < nm; ++h) {
          if (!bc.composable(h, g)) continue;
          std::size_t gf = bc.compose(g, f), hg = bc.compose(h, g);
          for (std::size_t a = 0; a < objs(bc.src(f)); ++a)
            for (std::size_t b = 0; b < objs(bc.dst(f)); ++b)
              for (std::size_t c = 0; c < objs(bc.dst(g)); ++c)
                for (std::size_t d = 0; d < objs(bc.dst(h)); ++d)
                  for (std::size_t i = 0; i < dim(f, a, b); ++i)
                    for (std::size_t j = 0; j < dim(g, b, c); ++j)
                      for (std::size_t l = 0; l < dim(h, c, d); ++l) {
                        Vec<K> x = unit_vector(k, dim(f, a, b), i), y = unit_vector(k, dim(g, b, c), j), z = unit_vector(k, dim(h, c, d), l);
                        if (compose(h, gf, a, c, d, z, compose(g, f, a, b, c, y, x)) != compose(hg, f, a, b, d, compose(h, g, b, c, d, z, y), x))
                          return "graded associativity fails over (" + bc.morphism(h).id + ", " + bc.morphism(g).id + ", " + bc.morphism(f).id + ")";
                      }
        }
      }
    for (std::size_t f = 0; f < nm; ++f)
      for (std::size_t b = 0; b < objs(bc.dst(f)); ++b)
        for (std::size_t g = 0; g < nm; ++g) {
          if (!bc.composable(f, g)) continue;
          for (std::size_t c = 0; c < objs(bc.src(g)); ++c) {
            if (!is_invertible(left_cleavage_matrix(f, g, b, c))) return "cleavage of '" + bc.morphism(f).id + "' is not cartesian";
          }
        }
    return std::nullopt;
  }

  /// Matrix of x ↦ δ_{f,B}·x from a_g(C, f*B) to a_{fg}(C, B).
  Matrix<K> left_cleavage_matrix(std::size_t f, std::size_t g, std::size_t b, std::size_t c) const {
    const K& k = p_->field();
    std::size_t fb = p_->pull(f, b), fg = base().compose(f, g);
    Matrix<K> m(k, dim(fg, c, b), dim(g, c, fb));
    for (std::size_t i = 0; i < dim(g, c, fb); ++i) m.set_column(i, compose(f, g, c, fb, b, cleavage(f, b), unit_vector(k, dim(g, c, fb), i)));
    return m;
  }

 private:
  PrestackPtr<K> p_;
};

template <class K>
GradedCategory<K> grothendieck(const PrestackPtr<K>& p) {
  p->validate();
  return GradedCategory<K>(p);
}

/// The twist category of a pair of graded categories: objects (B, u, A) with
/// u: V -> U, B over V and A over U; hom((B',u',A'), (B,u,A)) is the sum over
/// u' = p u q of b_q(B', B) ⊗ a_p(A, A'), basis index ib * dim_a + ia.
template <class K>
class TwistCategory {
 public:
  struct Object {
    std::size_t b, u, a;
  };
  struct Block {
    std::size_t p, q, dim_b, dim_a, offset;
  };

  TwistCategory(const GradedCategory<K>& a, const GradedCategory<K>& b) : a_(a), b_(b) {
    const auto& base = a_.base();
    const K& k = a_.prestack().field();
    std::vector<std::string> ids;
    for (std::size_t u = 0; u < base.num_morphisms(); ++u)
      for (std::size_t y = 0; y < b_.prestack().fiber(base.src(u)).num_objects(); ++y)
        for (std::size_t x = 0; x < a_.prestack().fiber(base.dst(u)).num_objects(); ++x) {
          index_[{y, u, x}] = objects_.size();
          objects_.push_back({y, u, x});
          ids.push_back("(" + b_.prestack().fiber(base.src(u)).object_id(y) + "," + base.morphism(u).id + "," + a_.prestack().fiber(base.dst(u)).object_id(x) + ")");
        }
    const std::size_t n = objects_.size();
    auto fact = base.fact();
    LinearCategory<K> cat(k, ids);
    blocks_.assign(n * n, {});
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        const auto& src = objects_[s];
        const auto& dst = objects_[t];
        std::size_t off = 0;
        for (std::size_t m : fact.category.hom(fact.object_of_arrow[dst.u], fact.object_of_arrow[src.u])) {
          auto [p, q] = fact.morphism_pq[m];
          Block bl{p, q, b_.dim(q, src.b, dst.b), a_.dim(p, dst.a, src.a), off};
          off += bl.dim_b * bl.dim_a;
          if (bl.dim_b * bl.dim_a > 0) blocks_[s * n + t].push_back(bl);
        }
        cat.set_hom(s, t, off);
      }
    for (std::size_t s = 0; s < n; ++s) {
      const auto& o = objects_[s];
      cat.set_identity(s, to_sparse(k, element(s, s, base.identity(base.dst(o.u)), base.identity(base.src(o.u)),
                                               b_.prestack().fiber(base.src(o.u)).identity(o.b), a_.prestack().fiber(base.dst(o.u)).identity(o.a))));
    }
    // (b ⊗ a) ∘ (b' ⊗ a') = b·b' ⊗ a'·a
    cat.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t gi, std::size_t fi) {
      auto [gb, gib, gia] = locate(y, z, gi);
      auto [fb, fib, fia] = locate(x, y, fi);
      const auto& X = objects_[x];
      const auto& Y = objects_[y];
      const auto& Z = objects_[z];
      Vec<K> bb = b_.compose(gb.q, fb.q, X.b, Y.b, Z.b, unit_vector(k, gb.dim_b, gib), unit_vector(k, fb.dim_b, fib));
      Vec<K> aa = a_.compose(fb.p, gb.p, Z.a, Y.a, X.a, unit_vector(k, fb.dim_a, fia), unit_vector(k, gb.dim_a, gia));
      return to_sparse(k, element(x, z, base.compose(fb.p, gb.p), base.compose(gb.q, fb.q), bb, aa));
    });
    cat_ = std::make_shared<const LinearCategory<K>>(std::move(cat));
  }

  const LinearCategoryPtr<K>& category() const { return cat_; }
  const GradedCategory<K>& a() const { return a_; }
  const GradedCategory<K>& b() const { return b_; }
  const std::vector<Object>& objects() const { return objects_; }
  std::size_t object_of(std::size_t b, std::size_t u, std::size_t a) const {
    auto it = index_.find({b, u, a});
    if (it == index_.end()) throw UnknownObject("no such twist object");
    return it->second;
  }
  const std::vector<Block>& blocks(std::size_t s, std::size_t t) const { return blocks_[s * objects_.size() + t]; }

  /// b ⊗ a placed in the (p, q) block of hom(s, t); zero if that block is empty.
  Vec<K> element(std::size_t s, std::size_t t, std::size_t p, std::size_t q, const Vec<K>& bv, const Vec<K>& av) const {
    const K& k = a_.prestack().field();
    std::size_t dim = 0;
    for (const auto& bl : blocks(s, t)) dim = std::max(dim, bl.offset + bl.dim_b * bl.dim_a);
    Vec<K> out(dim, k.zero());
    for (const auto& bl : blocks(s, t))
      if (bl.p == p && bl.q == q) add_tensor(k, out, bl.offset, bv, av, k.one());
    return out;
  }

  /// Block, ib and ia of the basis element i of hom(s, t).
  std::tuple<Block, std::size_t, std::size_t> locate(std::size_t s, std::size_t t, std::size_t i) const {
    for (const auto& bl : blocks(s, t))
      if (i >= bl.offset && i < bl.offset + bl.dim_b * bl.dim_a) return {bl, (i - bl.offset) / bl.dim_a, (i - bl.offset) % bl.dim_a};
    throw IndexOutOfRange("basis index outside every block");
  }

 private:

  GradedCategory<K> a_, b_;
  std::vector<Object> objects_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> index_;
  std::vector<std::vector<Block>> blocks_;
  LinearCategoryPtr<K> cat_;
};

/// The linear category r: objects (B, W, A) with A, B over W;
/// hom((B',W',A'), (B,W,A)) is the sum over w: W' -> W of
/// A(W')(w*A, A') ⊗ B(W')(B', w*B), basis index ia * dim_b + ib.
template <class K>
class RCategory {
 public:
  struct Object {
    std::size_t b, w, a;
  };
  struct Block {
    std::size_t w, dim_a, dim_b, offset;
  };

  RCategory(PrestackPtr<K> a, PrestackPtr<K> b) : a_(std::move(a)), b_(std::move(b)) {
    const auto& base = a_->base();
    const K& k = a_->field();
    std::vector<std::string> ids;
    for (std::size_t w = 0; w < base.num_objects(); ++w)
      for (std::size_t y = 0; y < b_->fiber(w).num_objects(); ++y)
        for (std::size_t x = 0; x < a_->fiber(w).num_objects(); ++x) {
          index_[{y, w, x}] = objects_.size();
          objects_.push_back({y, w, x});
          ids.push_back("(" + b_->fiber(w).object_id(y) + "," + base.object_id(w) + "," + a_->fiber(w).object_id(x) + ")");
        }
    const std::size_t n = objects_.size();
    LinearCategory<K> cat(k, ids);
    blocks_.assign(n * n, {});
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        const auto& src = objects_[s];
        const auto& dst = objects_[t];
        std::size_t off = 0;
        for (std::size_t w : base.hom(src.w, dst.w)) {
          Block bl{w, a_->fiber(src.w).hom_dim(a_->pull(w, dst.a), src.a), b_->fiber(src.w).hom_dim(src.b, b_->pull(w, dst.b)), off};
          off += bl.dim_a * bl.dim_b;
          if (bl.dim_a * bl.dim_b > 0) blocks_[s * n + t].push_back(bl);
        }
        cat.set_hom(s, t, off);
      }
    for (std::size_t s = 0; s < n; ++s) {
      const auto& o = objects_[s];
      cat.set_identity(s, to_sparse(k, element(s, s, base.identity(o.w), a_->fiber(o.w).identity(o.a), b_->fiber(o.w).identity(o.b))));
    }
    // g = (w, α, β): y -> z and f = (w', α', β'): x -> y give, in block w w',
    // α' ∘ w'*(α) ∘ c^{-1}_{w,w',A} and c_{w,w',B} ∘ w'*(β) ∘ β'
    cat.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t gi, std::size_t fi) {
      auto [gb, gia, gib] = locate(y, z, gi);
      auto [fb, fia, fib] = locate(x, y, fi);
      const auto& X = objects_[x];
      const auto& Y = objects_[y];
      const auto& Z = objects_[z];
      std::size_t w = gb.w, w2 = fb.w, ww = base.compose(w, w2);
      const auto& fa = a_->fiber(X.w);
      const auto& fbb = b_->fiber(X.w);
      std::size_t wa = a_->pull(w, Z.a), w2wa = a_->pull(w2, wa), wwa = a_->pull(ww, Z.a), w2ya = a_->pull(w2, Y.a);
      Vec<K> alpha = fa.compose(wwa, w2ya, X.a, unit_vector(k, fb.dim_a, fia),
                                fa.compose(wwa, w2wa, w2ya, a_->pull(w2, wa, Y.a, unit_vector(k, gb.dim_a, gia)), a_->coherence_inverse(w, w2, Z.a)));
      std::size_t wb = b_->pull(w, Z.b), w2wb = b_->pull(w2, wb), wwb = b_->pull(ww, Z.b), w2yb = b_->pull(w2, Y.b);
      Vec<K> beta = fbb.compose(X.b, w2wb, wwb, b_->coherence(w, w2, Z.b),
                                fbb.compose(X.b, w2yb, w2wb, b_->pull(w2, Y.b, wb, unit_vector(k, gb.dim_b, gib)), unit_vector(k, fb.dim_b, fib)));
      return to_sparse(k, element(x, z, ww, alpha, beta));
    });
    cat_ = std::make_shared<const LinearCategory<K>>(std::move(cat));
  }

  const LinearCategoryPtr<K>& category() const { return cat_; }
  const Prestack<K>& a() const { return *a_; }
  const Prestack<K>& b() const { return *b_; }
  const std::vector<Object>& objects() const { return objects_; }
  std::size_t object_of(std::size_t b, std::size_t w, std::size_t a) const {
    auto it = index_.find({b, w, a});
    if (it == index_.end()) throw UnknownObject("no such r object");
    return it->second;
  }
  const std::vector<Block>& blocks(std::size_t s, std::size_t t) const { return blocks_[s * objects_.size() + t]; }

  /// α ⊗ β placed in the w block of hom(s, t).
  Vec<K> element(std::size_t s, std::size_t t, std::size_t w, const Vec<K>& alpha, const Vec<K>& beta) const {
    const K& k = a_->field();
    std::size_t dim = 0;
    for (const auto& bl : blocks(s, t)) dim = std::max(dim, bl.offset + bl.dim_a * bl.dim_b);
    Vec<K> out(dim, k.zero());
    for (const auto& bl : blocks(s, t))
      if (bl.w == w) add_tensor(k, out, bl.offset, alpha, beta, k.one());
    return out;
  }

  std::tuple<Block, std::size_t, std::size_t> locate(std::size_t s, std::size_t t, std::size_t i) const {
    for (const auto& bl : blocks(s, t))
      if (i >= bl.offset && i < bl.offset + bl.dim_a * bl.dim_b) return {bl, (i - bl.offset) / bl.dim_b, (i - bl.offset) % bl.dim_b};
    throw IndexOutOfRange("basis index outside every block");
  }

 private:
  PrestackPtr<K> a_, b_;
  std::vector<Object> objects_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> index_;
  std::vector<std::vector<Block>> blocks_;
  LinearCategoryPtr<K> cat_;
};

/// Π: t -> r, (B, u: V -> U, A) ↦ (B, V, u*A). The element b ⊗ a in block
/// (p, q) goes to block q with β = b and α = c_{pu,q,A'} ∘ q*(c_{p,u,A'} ∘ u*(a)).
template <class K>
LinearFunctor<K> pi_functor(const TwistCategory<K>& t, const RCategory<K>& r) {
  const auto& pa = r.a();
  const auto& base = pa.base();
  const K& k = pa.field();
  const auto& tc = *t.category();
  const std::size_t n = tc.num_objects();
  LinearFunctor<K> f{t.category(), r.category(), {}, {}};
  for (const auto& o : t.objects()) f.object_map.push_back(r.object_of(o.b, base.src(o.u), pa.pull(o.u, o.a)));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t d = 0; d < n; ++d) {
      const auto& X = t.objects()[s];  // (B', u', A')
      const auto& Y = t.objects()[d];  // (B, u, A)
      std::size_t rs = f.object_map[s], rd = f.object_map[d];
      Matrix<K> m(k, r.category()->hom_dim(rs, rd), tc.hom_dim(s, d));
      for (const auto& bl : t.blocks(s, d)) {
        std::size_t p = bl.p, q = bl.q, u = Y.u, pu = base.compose(p, u);
        const auto& fv = pa.fiber(base.src(u));
        const auto& fv2 = pa.fiber(base.src(q));
        std::size_t ua = pa.pull(u, Y.a), pa2 = pa.pull(p, X.a), upa = pa.pull(u, pa2), pua = pa.pull(pu, X.a);
        for (std::size_t ia = 0; ia < bl.dim_a; ++ia) {
          Vec<K> a = unit_vector(k, bl.dim_a, ia);
          Vec<K> inner = fv.compose(ua, upa, pua, pa.coherence(p, u, X.a), pa.pull(u, Y.a, pa2, a));
          std::size_t qua = pa.pull(q, ua), qpua = pa.pull(q, pua);
          Vec<K> alpha = fv2.compose(qua, qpua, pa.pull(base.compose(pu, q), X.a), pa.coherence(pu, q, X.a), pa.pull(q, ua, pua, inner));
          for (std::size_t ib = 0; ib < bl.dim_b; ++ib) {
            Vec<K> img = r.element(rs, rd, q, alpha, unit_vector(k, bl.dim_b, ib));
            m.set_column(bl.offset + ib * bl.dim_a + ia, img);
          }
        }
      }
      f.hom_matrix.push_back(std::move(m));
    }
  return f;
}

/// The t, r and Π of a pair of prestacks over the same base.
template <class K>
struct BimoduleSetting {
  PrestackPtr<K> a, b;
  TwistCategory<K> t;
  RCategory<K> r;
  LinearFunctor<K> pi;
  LinearFunctor<K> pi_op;
  LinearCategoryPtr<K> t_op, r_op;

  BimoduleSetting(PrestackPtr<K> a_, PrestackPtr<K> b_)
      : a(a_), b(b_), t(grothendieck(a_), grothendieck(b_)), r(a_, b_), pi(pi_functor(t, r)) {
    t_op = std::make_shared<const LinearCategory<K>>(t.category()->opposite());
    r_op = std::make_shared<const LinearCategory<K>>(r.category()->opposite());
    pi_op = pi.opposite(t_op, r_op);
  }

  const FiniteCategory& base() const { return a->base(); }
  const K& field() const { return a->field(); }

  std::size_t t_object(std::size_t bo, std::size_t u, std::size_t ao) const { return t.object_of(bo, u, ao); }
  std::size_t r_object(std::size_t bo, std::size_t w, std::size_t ao) const { return r.object_of(bo, w, ao); }

  /// id_B ⊗ δ_{u,A'} in t((B, uv, A'), (B, v, u*A')), v: V -> U, u: U -> U'.
  std::tuple<std::size_t, std::size_t, Vec<K>> left_cleavage(std::size_t u, std::size_t v, std::size_t bo, std::size_t ao) const {
    const auto& bs = base();
    std::size_t s = t.object_of(bo, bs.compose(u, v), ao);
    std::size_t d = t.object_of(bo, v, a->pull(u, ao));
    return {s, d, t.element(s, d, u, bs.identity(bs.src(v)), b->fiber(bs.src(v)).identity(bo), t.a().cleavage(u, ao))};
  }

  /// δ_{q,B} ⊗ id_A in t((q*B, uq, A), (B, u, A)), q: V' -> V, u: V -> U.
  std::tuple<std::size_t, std::size_t, Vec<K>> right_cleavage(std::size_t q, std::size_t u, std::size_t bo, std::size_t ao) const {
    const auto& bs = base();
    std::size_t s = t.object_of(b->pull(q, bo), bs.compose(u, q), ao);
    std::size_t d = t.object_of(bo, u, ao);
    return {s, d, t.element(s, d, bs.identity(bs.dst(u)), q, t.b().cleavage(q, bo), a->fiber(bs.dst(u)).identity(ao))};
  }
};

template <class K>
FDModule<K> pi_star(const BimoduleSetting<K>& s, const FDModule<K>& m) {
  return restrict_along(s.pi, m);
}

/// Left multiplication by every cleavage element is invertible.
template <class K>
bool is_fibered(const BimoduleSetting<K>& s, const FDModule<K>& m) {
  const auto& bs = s.base();
  for (std::size_t u = 0; u < bs.num_morphisms(); ++u)
    for (std::size_t v = 0; v < bs.num_morphisms(); ++v) {
      if (!bs.composable(u, v)) continue;
      for (std::size_t ao = 0; ao < s.a->fiber(bs.dst(u)).num_objects(); ++ao)
        for (std::size_t bo = 0; bo < s.b->fiber(bs.src(v)).num_objects(); ++bo) {
          auto [x, y, e] = s.left_cleavage(u, v, bo, ao);
          if (!is_invertible(m.act(x, y, e))) return false;
        }
    }
  return true;
}

/// (Π_* M)(B, W, A) = M_{1_W}(B, A). The generator α ⊗ β over w: W' -> W acts
/// by M(β ⊗ α) ∘ L^{-1} ∘ R with R = M(δ_{w,B} ⊗ id_A) and
/// L = M(id ⊗ δ_{w,A}).
template <class K>
FDModule<K> pi_lower(const BimoduleSetting<K>& s, const FDModule<K>& m) {
  if (!is_fibered(s, m)) throw NotFibered("bimodule is not fibered");
  const auto& bs = s.base();
  const auto& rc = *s.r.category();
  const K& k = s.field();
  const std::size_t n = rc.num_objects();
  auto at = [&](std::size_t i) {
    const auto& o = s.r.objects()[i];
    return s.t.object_of(o.b, bs.identity(o.w), o.a);
  };
  std::vector<std::size_t> dims(n);
  for (std::size_t i = 0; i < n; ++i) dims[i] = m.dim(at(i));
  FDModule<K> out(s.r.category(), dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (rc.hom_dim(x, y) == 0) continue;
      const auto& src = s.r.objects()[x];  // (B', W', A')
      const auto& dst = s.r.objects()[y];  // (B, W, A)
      for (const auto& bl : s.r.blocks(x, y)) {
        std::size_t w = bl.w;
        auto [r1, r2, re] = s.right_cleavage(w, bs.identity(dst.w), dst.b, dst.a);
        auto [l1, l2, le] = s.left_cleavage(w, bs.identity(src.w), s.b->pull(w, dst.b), dst.a);
        Matrix<K> rm = m.act(r1, r2, re);
        Matrix<K> linv = *inverse(m.act(l1, l2, le));
        Matrix<K> mid = linv * rm;
        std::size_t t3 = at(x);
        std::size_t one = bs.identity(src.w);
        for (std::size_t ia = 0; ia < bl.dim_a; ++ia)
          for (std::size_t ib = 0; ib < bl.dim_b; ++ib) {
            Vec<K> e = s.t.element(t3, l2, one, one, unit_vector(k, bl.dim_b, ib), unit_vector(k, bl.dim_a, ia));
            out.action(x, y, bl.offset + ia * bl.dim_b + ib) = m.act(t3, l2, e) * mid;
          }
      }
    }
  return out;
}

/// Π*Π_* M -> M at (B, u, A) is M(id_B ⊗ δ_{u,A}).
template <class K>
ModuleMap<K> pi_counit(const BimoduleSetting<K>& s, const FDModule<K>& m) {
  const auto& bs = s.base();
  ModuleMap<K> phi;
  for (const auto& o : s.t.objects()) {
    auto [x, y, e] = s.left_cleavage(o.u, bs.identity(bs.src(o.u)), o.b, o.a);
    phi.components.push_back(m.act(x, y, e));
  }
  return phi;
}

/// N -> Π_*Π* N is the identity on every space.
template <class K>
ModuleMap<K> pi_unit(const BimoduleSetting<K>& s, const FDModule<K>& n) {
  ModuleMap<K> phi;
  for (std::size_t x = 0; x < n.category().num_objects(); ++x) phi.components.push_back(Matrix<K>::identity(s.field(), n.dim(x)));
  return phi;
}

/// D(B, W, A) = A(W)(B, A) over r(A, A); α ⊗ β over w acts by x ↦ α ∘ w*(x) ∘ β.
template <class K>
FDModule<K> diagonal_bimodule(const BimoduleSetting<K>& s) {
  const auto& pa = *s.a;
  const auto& rc = *s.r.category();
  const K& k = s.field();
  const std::size_t n = rc.num_objects();
  std::vector<std::size_t> dims(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = s.r.objects()[i];
    dims[i] = pa.fiber(o.w).hom_dim(o.b, o.a);
  }
  FDModule<K> d(s.r.category(), dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto& src = s.r.objects()[x];
      const auto& dst = s.r.objects()[y];
      const auto& f2 = pa.fiber(src.w);
      for (const auto& bl : s.r.blocks(x, y)) {
        std::size_t wb = pa.pull(bl.w, dst.b), wa = pa.pull(bl.w, dst.a);
        for (std::size_t ia = 0; ia < bl.dim_a; ++ia)
          for (std::size_t ib = 0; ib < bl.dim_b; ++ib) {
            Matrix<K> mat(k, dims[x], dims[y]);
            for (std::size_t j = 0; j < dims[y]; ++j) {
              Vec<K> wx = pa.pull(bl.w, dst.b, dst.a, unit_vector(k, dims[y], j));
              Vec<K> t = f2.compose(src.b, wb, wa, wx, unit_vector(k, bl.dim_b, ib));
              mat.set_column(j, f2.compose(src.b, wa, src.a, unit_vector(k, bl.dim_a, ia), t));
            }
            d.action(x, y, bl.offset + ia * bl.dim_b + ib) = mat;
          }
      }
    }
  return d;
}

/// The graded category as a graded bimodule over itself:
/// M(B, u, A) = a_u(B, A), with b ⊗ a acting by m ↦ a·m·b.
template <class K>
FDModule<K> graded_regular_bimodule(const BimoduleSetting<K>& s) {
  const auto& ga = s.t.a();
  const auto& tc = *s.t.category();
  const auto& bs = s.base();
  const K& k = s.field();
  const std::size_t n = tc.num_objects();
  std::vector<std::size_t> dims(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = s.t.objects()[i];
    dims[i] = ga.dim(o.u, o.b, o.a);
  }
  FDModule<K> m(s.t.category(), dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto& src = s.t.objects()[x];  // (B', u', A')
      const auto& dst = s.t.objects()[y];  // (B, u, A)
      for (const auto& bl : s.t.blocks(x, y)) {
        std::size_t uq = bs.compose(dst.u, bl.q);
        for (std::size_t ib = 0; ib < bl.dim_b; ++ib)
          for (std::size_t ia = 0; ia < bl.dim_a; ++ia) {
            Matrix<K> mat(k, dims[x], dims[y]);
            for (std::size_t j = 0; j < dims[y]; ++j) {
              Vec<K> mb = ga.compose(dst.u, bl.q, src.b, dst.b, dst.a, unit_vector(k, dims[y], j), unit_vector(k, bl.dim_b, ib));
              mat.set_column(j, ga.compose(bl.p, uq, src.b, dst.a, src.a, unit_vector(k, bl.dim_a, ia), mb));
            }
            m.action(x, y, bl.offset + ib * bl.dim_a + ia) = mat;
          }
      }
    }
  return m;
}

/// Yoneda: the map 𝔠(−, s) -> 𝔠(−, t) given by composing with e ∈ 𝔠(s, t).
template <class K>
ModuleMap<K> yoneda_map(const LinearCategoryPtr<K>& c, std::size_t s, std::size_t t, const Vec<K>& e) {
  ModuleMap<K> phi;
  for (std::size_t z = 0; z < c->num_objects(); ++z) phi.components.push_back(c->left_mult(z, s, t, e));
  return phi;
}

template <class K>
FDModule<K> projective_bimodule(const BimoduleSetting<K>& s, std::size_t bo, std::size_t u, std::size_t ao) {
  return representable(s.t.category(), s.t.object_of(bo, u, ao));
}

template <class K>
FDModule<K> p_fib(const BimoduleSetting<K>& s, std::size_t bo, std::size_t w, std::size_t ao) {
  return representable(s.r.category(), s.r.object_of(bo, w, ao));
}

template <class K>
struct DeltaMap {
  std::size_t source, target;
  Vec<K> element;
  ModuleMap<K> map;
};

/// δ^r_q: P_{q*B, uq, A} -> P_{B, u, A}.
template <class K>
DeltaMap<K> delta_r(const BimoduleSetting<K>& s, std::size_t q, std::size_t u, std::size_t bo, std::size_t ao) {
  auto [x, y, e] = s.right_cleavage(q, u, bo, ao);
  return {x, y, e, yoneda_map(s.t.category(), x, y, e)};
}

/// δ^l_p: P_{B, pu, A'} -> P_{B, u, p*A'}.
template <class K>
DeltaMap<K> delta_l(const BimoduleSetting<K>& s, std::size_t p, std::size_t u, std::size_t bo, std::size_t ao) {
  auto [x, y, e] = s.left_cleavage(p, u, bo, ao);
  return {x, y, e, yoneda_map(s.t.category(), x, y, e)};
}

}  // namespace cct
