#pragma once

// Right modules over a finite-dimensional linear category: a vector space
// per object and, for every basis morphism f: x -> y, a matrix M(f) from
// M(y) to M(x). Left modules are right modules over the opposite category.

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cct/linear_category.hpp"
#include "cct/matrix.hpp"

namespace cct {

template <class K>
class FDModule {
 public:
  FDModule() = default;
  FDModule(LinearCategoryPtr<K> cat, std::vector<std::size_t> dims) : cat_(std::move(cat)), dims_(std::move(dims)) {
    const std::size_t n = cat_->num_objects();
    if (dims_.size() != n) throw ValidationError("module", "dims", "one dimension per object expected");
    actions_.resize(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        actions_[x * n + y].assign(cat_->hom_dim(x, y), Matrix<K>(cat_->field(), dims_[x], dims_[y]));
  }

  static FDModule zero(const LinearCategoryPtr<K>& cat) { return FDModule(cat, std::vector<std::size_t>(cat->num_objects(), 0)); }

  const LinearCategory<K>& category() const { return *cat_; }
  const LinearCategoryPtr<K>& category_ptr() const { return cat_; }
  const K& field() const { return cat_->field(); }
  std::size_t dim(std::size_t x) const { return dims_[x]; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto d : dims_) s += d;
    return s;
  }

  /// M(f) for the f-th basis element of hom(x, y); maps M(y) -> M(x).
  const Matrix<K>& action(std::size_t x, std::size_t y, std::size_t f) const { return actions_[x * cat_->num_objects() + y][f]; }
  Matrix<K>& action(std::size_t x, std::size_t y, std::size_t f) { return actions_[x * cat_->num_objects() + y][f]; }

  /// M(a) for an arbitrary element a of hom(x, y).
  Matrix<K> act(std::size_t x, std::size_t y, const Vec<K>& a) const {
    const K& k = field();
    Matrix<K> m(k, dims_[x], dims_[y]);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!k.is_zero(a[i])) m.add_block(0, 0, action(x, y, i), a[i]);
    return m;
  }

  std::optional<std::string> violation() const {
    const auto& c = *cat_;
    const K& k = field();
    const std::size_t n = c.num_objects();
    for (std::size_t x = 0; x < n; ++x)
      if (!act(x, x, c.identity(x)).is_identity()) return "identity of '" + c.object_id(x) + "' does not act as the identity";
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (c.hom_dim(x, y) == 0) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (c.hom_dim(y, z) == 0) continue;
          for (std::size_t g = 0; g < c.hom_dim(y, z); ++g)
            for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
              Matrix<K> lhs = act(x, z, to_dense(k, c.product(x, y, z, g, f), c.hom_dim(x, z)));
              if (lhs != action(x, y, f) * action(y, z, g))
                return "M(g∘f) ≠ M(f)M(g) on basis (" + std::to_string(g) + ", " + std::to_string(f) + ") over (" + c.object_id(x) + ", " +
                       c.object_id(y) + ", " + c.object_id(z) + ")";
            }
        }
      }
    return std::nullopt;
  }

  void validate(const std::string& path = "module") const {
    if (auto v = violation()) throw ValidationError(path, "module", *v);
  }

 private:
  LinearCategoryPtr<K> cat_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<Matrix<K>>> actions_;
};

/// Components φ_x: M(x) -> N(x).
template <class K>
struct ModuleMap {
  std::vector<Matrix<K>> components;
};

template <class K>
bool is_module_map(const FDModule<K>& m, const FDModule<K>& n, const ModuleMap<K>& phi) {
  const auto& c = m.category();
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f)
        if (phi.components[x] * m.action(x, y, f) != n.action(x, y, f) * phi.components[y]) return false;
  return true;
}

template <class K>
bool is_isomorphism(const ModuleMap<K>& phi) {
  for (const auto& c : phi.components)
    if (!is_invertible(c)) return false;
  return true;
}

template <class K>
ModuleMap<K> compose_maps(const ModuleMap<K>& g, const ModuleMap<K>& f) {
  ModuleMap<K> out;
  for (std::size_t x = 0; x < f.components.size(); ++x) out.components.push_back(g.components[x] * f.components[x]);
  return out;
}

/// y ↦ hom(y, x), acting by precomposition.
template <class K>
FDModule<K> representable(const LinearCategoryPtr<K>& c, std::size_t x) {
  if (x >= c->num_objects()) throw UnknownObject("representable: object out of range");
  const std::size_t n = c->num_objects();
  std::vector<std::size_t> dims(n);
  for (std::size_t y = 0; y < n; ++y) dims[y] = c->hom_dim(y, x);
  FDModule<K> m(c, dims);
  for (std::size_t y2 = 0; y2 < n; ++y2)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c->hom_dim(y2, y); ++f)
        m.action(y2, y, f) = c->right_mult(y2, y, x, unit_vector(c->field(), c->hom_dim(y2, y), f));
  return m;
}

/// The intertwining system φ_x M(f) = N(f) φ_y, one block of unknowns per object.
template <class K>
class HomSystem {
 public:
  HomSystem(const FDModule<K>& m, const FDModule<K>& n) : m_(m), n_(n) {
    const std::size_t objs = m.category().num_objects();
    offsets_.assign(objs + 1, 0);
    for (std::size_t x = 0; x < objs; ++x) offsets_[x + 1] = offsets_[x] + n.dim(x) * m.dim(x);
  }

  std::size_t unknowns() const { return offsets_.back(); }

  Echelon<K> equations() const {
    const auto& c = m_.category();
    const K& k = m_.field();
    Echelon<K> e(k, unknowns());
    const std::size_t objs = c.num_objects();
    for (std::size_t x = 0; x < objs; ++x)
      for (std::size_t y = 0; y < objs; ++y) {
        if (n_.dim(x) == 0 || m_.dim(y) == 0) continue;
        for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
          const Matrix<K>& mf = m_.action(x, y, f);
          const Matrix<K>& nf = n_.action(x, y, f);
          for (std::size_t r = 0; r < n_.dim(x); ++r)
            for (std::size_t col = 0; col < m_.dim(y); ++col) {
              Sparse<K> row;
              for (std::size_t s = 0; s < m_.dim(x); ++s)
                if (!k.is_zero(mf(s, col))) row.emplace_back(offsets_[x] + r * m_.dim(x) + s, mf(s, col));
              for (std::size_t t = 0; t < n_.dim(y); ++t)
                if (!k.is_zero(nf(r, t))) row.emplace_back(offsets_[y] + t * m_.dim(y) + col, k.neg(nf(r, t)));
              if (!row.empty()) e.insert_sparse(row);
            }
        }
      }
    return e;
  }

  ModuleMap<K> unpack(const Vec<K>& v) const {
    ModuleMap<K> phi;
    const std::size_t objs = m_.category().num_objects();
    for (std::size_t x = 0; x < objs; ++x) {
      Matrix<K> c(m_.field(), n_.dim(x), m_.dim(x));
      for (std::size_t r = 0; r < n_.dim(x); ++r)
        for (std::size_t s = 0; s < m_.dim(x); ++s) c(r, s) = v[offsets_[x] + r * m_.dim(x) + s];
      phi.components.push_back(std::move(c));
    }
    return phi;
  }

  Vec<K> pack(const ModuleMap<K>& phi) const {
    Vec<K> v(unknowns(), m_.field().zero());
    for (std::size_t x = 0; x < phi.components.size(); ++x)
      for (std::size_t r = 0; r < n_.dim(x); ++r)
        for (std::size_t s = 0; s < m_.dim(x); ++s) v[offsets_[x] + r * m_.dim(x) + s] = phi.components[x](r, s);
    return v;
  }

 private:
  const FDModule<K>& m_;
  const FDModule<K>& n_;
  std::vector<std::size_t> offsets_;
};

template <class K>
std::size_t hom_dim(const FDModule<K>& m, const FDModule<K>& n) {
  HomSystem<K> sys(m, n);
  if (sys.unknowns() == 0) return 0;
  return sys.unknowns() - sys.equations().rank();
}

/// Basis of Hom(m, n).
template <class K>
std::vector<ModuleMap<K>> hom_space(const FDModule<K>& m, const FDModule<K>& n) {
  HomSystem<K> sys(m, n);
  std::vector<ModuleMap<K>> out;
  if (sys.unknowns() == 0) return out;
  Echelon<K> e = sys.equations();
  Matrix<K> ker = echelon_kernel(e, m.field());
  for (std::size_t j = 0; j < ker.cols(); ++j) out.push_back(sys.unpack(ker.column(j)));
  return out;
}

/// (F* m)(x) = m(F x).
template <class K>
FDModule<K> restrict_along(const LinearFunctor<K>& f, const FDModule<K>& m) {
  const auto& s = *f.source;
  const std::size_t n = s.num_objects();
  std::vector<std::size_t> dims(n);
  for (std::size_t x = 0; x < n; ++x) dims[x] = m.dim(f.object_map[x]);
  FDModule<K> out(f.source, dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (s.hom_dim(x, y) == 0 || dims[x] == 0 || dims[y] == 0) continue;
      const Matrix<K>& fm = f.map(x, y);
      for (std::size_t a = 0; a < s.hom_dim(x, y); ++a) out.action(x, y, a) = m.act(f.object_map[x], f.object_map[y], fm.column(a));
    }
  return out;
}

template <class K>
ModuleMap<K> restrict_map(const LinearFunctor<K>& f, const ModuleMap<K>& phi) {
  ModuleMap<K> out;
  for (std::size_t x : f.object_map) out.components.push_back(phi.components[x]);
  return out;
}

template <class K>
FDModule<K> direct_sum(const FDModule<K>& a, const FDModule<K>& b) {
  const auto& c = a.category();
  const std::size_t n = c.num_objects();
  std::vector<std::size_t> dims(n);
  for (std::size_t x = 0; x < n; ++x) dims[x] = a.dim(x) + b.dim(x);
  FDModule<K> out(a.category_ptr(), dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
        out.action(x, y, f).set_block(0, 0, a.action(x, y, f));
        out.action(x, y, f).set_block(a.dim(x), a.dim(y), b.action(x, y, f));
      }
  return out;
}

/// Change of basis: the module with M'(x) = M(x) in the basis given by the
/// columns of the invertible matrices g[x].
template <class K>
FDModule<K> rebase(const FDModule<K>& m, const std::vector<Matrix<K>>& g) {
  const auto& c = m.category();
  FDModule<K> out(m.category_ptr(), m.dims());
  std::vector<Matrix<K>> ginv;
  for (const auto& gx : g) ginv.push_back(*inverse(gx));
  for (std::size_t x = 0; x < c.num_objects(); ++x)
    for (std::size_t y = 0; y < c.num_objects(); ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) out.action(x, y, f) = ginv[x] * m.action(x, y, f) * g[y];
  return out;
}

/// Bases of the spaces of a submodule, one matrix of columns per object.
template <class K>
struct Subspaces {
  std::vector<Matrix<K>> basis;
};

/// Smallest submodule containing the given elements (x, v ∈ M(x)).
template <class K>
Subspaces<K> generated_submodule(const FDModule<K>& m, const std::vector<std::pair<std::size_t, Vec<K>>>& generators) {
  const auto& c = m.category();
  const std::size_t n = c.num_objects();
  std::vector<Echelon<K>> ech;
  std::vector<std::vector<Vec<K>>> cols(n);
  for (std::size_t y = 0; y < n; ++y) ech.emplace_back(m.field(), m.dim(y));
  for (const auto& [x, v] : generators)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c.hom_dim(y, x); ++f) {
        Vec<K> w = m.action(y, x, f).apply(v);
        if (ech[y].insert(w)) cols[y].push_back(std::move(w));
      }
  Subspaces<K> s;
  for (std::size_t y = 0; y < n; ++y) s.basis.push_back(Matrix<K>::from_columns(m.field(), m.dim(y), cols[y]));
  return s;
}

/// The module structure on a submodule given by bases of its spaces.
template <class K>
FDModule<K> submodule(const FDModule<K>& m, const Subspaces<K>& s) {
  const auto& c = m.category();
  const std::size_t n = c.num_objects();
  std::vector<std::size_t> dims(n);
  for (std::size_t x = 0; x < n; ++x) dims[x] = s.basis[x].cols();
  FDModule<K> out(m.category_ptr(), dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (dims[x] == 0 || dims[y] == 0) continue;
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) out.action(x, y, f) = solve_matrix(s.basis[x], m.action(x, y, f) * s.basis[y]);
    }
  return out;
}

/// M / S, with the quotient basis given by the standard vectors that extend a basis of S.
template <class K>
FDModule<K> quotient(const FDModule<K>& m, const Subspaces<K>& s) {
  const auto& c = m.category();
  const K& k = m.field();
  const std::size_t n = c.num_objects();
  std::vector<Matrix<K>> lift(n), project(n);
  std::vector<std::size_t> dims(n);
  for (std::size_t x = 0; x < n; ++x) {
    Echelon<K> e(k, m.dim(x));
    for (std::size_t j = 0; j < s.basis[x].cols(); ++j) e.insert(s.basis[x].column(j));
    std::vector<Vec<K>> comp;
    for (std::size_t i = 0; i < m.dim(x); ++i) {
      Vec<K> u = unit_vector(k, m.dim(x), i);
      if (e.insert(u)) comp.push_back(u);
    }
    dims[x] = comp.size();
    lift[x] = Matrix<K>::from_columns(k, m.dim(x), comp);
    Matrix<K> full(k, m.dim(x), m.dim(x));
    full.set_block(0, 0, s.basis[x]);
    full.set_block(0, s.basis[x].cols(), lift[x]);
    Matrix<K> inv = *inverse(full);
    project[x] = inv.block(s.basis[x].cols(), 0, dims[x], m.dim(x));
  }
  FDModule<K> out(m.category_ptr(), dims);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (dims[x] == 0 || dims[y] == 0) continue;
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) out.action(x, y, f) = project[x] * m.action(x, y, f) * lift[y];
    }
  return out;
}

/// A seeded module whose spaces have dimension at most `max_dim`: a cyclic
/// submodule or quotient of a representable or of a sum of two.
template <class K>
FDModule<K> random_module(const LinearCategoryPtr<K>& c, std::mt19937_64& rng, std::size_t max_dim = 2, int attempts = 200) {
  const K& k = c->field();
  const std::size_t n = c->num_objects();
  std::optional<FDModule<K>> best;
  std::size_t best_excess = static_cast<std::size_t>(-1);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::size_t x = rng() % n;
    FDModule<K> source = representable(c, x);
    if (rng() % 2) source = direct_sum(source, representable(c, rng() % n));
    std::size_t y = rng() % n;
    if (source.dim(y) == 0) continue;
    Vec<K> v(source.dim(y), k.zero());
    for (auto& e : v) e = k.from_int(static_cast<long long>(rng() % 5) - 2);
    if (std::all_of(v.begin(), v.end(), [&](const auto& e) { return k.is_zero(e); })) continue;
    auto sub = generated_submodule(source, {{y, v}});
    FDModule<K> cand = (rng() % 2) ? submodule(source, sub) : quotient(source, sub);
    if (cand.total_dim() == 0) continue;
    std::size_t excess = 0;
    for (auto d : cand.dims()) excess += d > max_dim ? d - max_dim : 0;
    if (excess == 0) return cand;
    if (excess < best_excess) {
      best_excess = excess;
      best = cand;
    }
  }
  if (best) return *best;
  return representable(c, 0);
}

}  // namespace cct
