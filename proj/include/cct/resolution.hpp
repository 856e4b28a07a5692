#pragma once

// Free modules (sums of representables), projective resolutions, Ext, Tor
// and the tensor product over a linear category.

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "cct/chain_complex.hpp"
#include "cct/module.hpp"

namespace cct {

/// ⊕_j hom(-, gens[j]). An element of F(y) is a vector laid out summand by
/// summand.
template <class K>
struct FreeModule {
  LinearCategoryPtr<K> cat;
  std::vector<std::size_t> gens;

  std::size_t dim_at(std::size_t y) const {
    std::size_t d = 0;
    for (std::size_t g : gens) d += cat->hom_dim(y, g);
    return d;
  }
  std::vector<std::size_t> offsets(std::size_t y) const {
    std::vector<std::size_t> off{0};
    for (std::size_t g : gens) off.push_back(off.back() + cat->hom_dim(y, g));
    return off;
  }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (std::size_t y = 0; y < cat->num_objects(); ++y) d.push_back(dim_at(y));
    return d;
  }

  /// F(f) for the f-th basis element of hom(x, y): F(y) -> F(x).
  Matrix<K> action(std::size_t x, std::size_t y, std::size_t f) const {
    const auto& c = *cat;
    Matrix<K> m(c.field(), dim_at(x), dim_at(y));
    auto ox = offsets(x), oy = offsets(y);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const std::size_t g = gens[j];
      for (std::size_t b = 0; b < c.hom_dim(y, g); ++b)
        for (const auto& [r, v] : c.product(x, y, g, b, f)) m(ox[j] + r, oy[j] + b) = c.field().add(m(ox[j] + r, oy[j] + b), v);
    }
    return m;
  }

  FDModule<K> materialize() const {
    FDModule<K> m(cat, dims());
    for (std::size_t x = 0; x < cat->num_objects(); ++x)
      for (std::size_t y = 0; y < cat->num_objects(); ++y)
        for (std::size_t f = 0; f < cat->hom_dim(x, y); ++f) m.action(x, y, f) = action(x, y, f);
    return m;
  }
};

/// Matrix at object y of the map F -> M sending generator j to images[j] ∈ M(gens[j]).
template <class K>
Matrix<K> free_to_module_matrix(const FreeModule<K>& f, const std::vector<Vec<K>>& images, const FDModule<K>& m, std::size_t y) {
  const auto& c = *f.cat;
  Matrix<K> out(c.field(), m.dim(y), f.dim_at(y));
  auto off = f.offsets(y);
  for (std::size_t j = 0; j < f.gens.size(); ++j)
    for (std::size_t b = 0; b < c.hom_dim(y, f.gens[j]); ++b) {
      Vec<K> col = m.action(y, f.gens[j], b).apply(images[j]);
      for (std::size_t r = 0; r < col.size(); ++r) out(r, off[j] + b) = col[r];
    }
  return out;
}

/// Matrix at object y of the map F -> G with generator j ↦ images[j] ∈ G(F.gens[j]).
template <class K>
Matrix<K> free_map_matrix(const FreeModule<K>& f, const FreeModule<K>& g, const std::vector<Vec<K>>& images, std::size_t y) {
  const auto& c = *f.cat;
  const K& k = c.field();
  Matrix<K> out(k, g.dim_at(y), f.dim_at(y));
  auto of = f.offsets(y), og = g.offsets(y);
  for (std::size_t j = 0; j < f.gens.size(); ++j) {
    const std::size_t xj = f.gens[j];
    auto ot = g.offsets(xj);
    for (std::size_t b = 0; b < c.hom_dim(y, xj); ++b)
      for (std::size_t i = 0; i < g.gens.size(); ++i)
        for (std::size_t t = 0; t < c.hom_dim(xj, g.gens[i]); ++t) {
          const auto& coeff = images[j][ot[i] + t];
          if (k.is_zero(coeff)) continue;
          for (const auto& [r, v] : c.product(y, xj, g.gens[i], t, b)) k.add_mul(out(og[i] + r, of[j] + b), coeff, v);
        }
  }
  return out;
}

/// Generators (objects and elements) whose images span the module.
template <class K>
struct Cover {
  std::vector<std::size_t> objects;
  std::vector<Vec<K>> elements;
};

/// One generator per basis vector of every space.
template <class K>
Cover<K> naive_cover(const FDModule<K>& m) {
  Cover<K> c;
  for (std::size_t x = 0; x < m.category().num_objects(); ++x)
    for (std::size_t i = 0; i < m.dim(x); ++i) {
      c.objects.push_back(x);
      c.elements.push_back(unit_vector(m.field(), m.dim(x), i));
    }
  return c;
}

/// Generators chosen one at a time, each a seeded random combination that is
/// not yet in the submodule generated so far. Usually far fewer than one per
/// basis vector.
template <class K>
Cover<K> greedy_cover(const FDModule<K>& m, std::uint64_t seed) {
  const auto& c = m.category();
  const K& k = m.field();
  const std::size_t n = c.num_objects();
  std::mt19937_64 rng(seed);
  std::vector<Echelon<K>> span;
  for (std::size_t y = 0; y < n; ++y) span.emplace_back(k, m.dim(y));
  auto add = [&](std::size_t x, const Vec<K>& v) {
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c.hom_dim(y, x); ++f) span[y].insert(m.action(y, x, f).apply(v));
  };
  Cover<K> out;
  for (std::size_t x = 0; x < n; ++x) {
    while (span[x].rank() < m.dim(x)) {
      Vec<K> v(m.dim(x), k.zero());
      for (auto& e : v) e = k.from_int(static_cast<long long>(rng() % 7) - 3);
      if (span[x].contains(v)) {
        for (std::size_t i = 0; i < m.dim(x); ++i) {
          v = unit_vector(k, m.dim(x), i);
          if (!span[x].contains(v)) break;
        }
      }
      add(x, v);
      out.objects.push_back(x);
      out.elements.push_back(std::move(v));
    }
  }
  return out;
}

/// P_len -> ... -> P_0 -> M. differentials[n - 1] is d_n: P_n -> P_{n-1},
/// given by the images of the generators of P_n.
template <class K>
struct Resolution {
  std::vector<FreeModule<K>> terms;
  std::vector<Vec<K>> augmentation;
  std::vector<std::vector<Vec<K>>> differentials;

  int length() const { return static_cast<int>(terms.size()) - 1; }
};

enum class CoverKind { Greedy, Naive };

/// Iterated covers of kernels. Stops early once a kernel vanishes.
template <class K>
Resolution<K> projective_resolution(const FDModule<K>& m, int length, CoverKind kind = CoverKind::Greedy, std::uint64_t seed = 0x5eed) {
  const auto& cat = m.category_ptr();
  const std::size_t n = cat->num_objects();
  Resolution<K> res;
  FDModule<K> target = m;
  // kernel basis of the previous step, in coordinates of the previous term
  std::vector<Matrix<K>> embed;
  for (int deg = 0; deg <= length; ++deg) {
    Cover<K> cov = kind == CoverKind::Greedy ? greedy_cover(target, seed + static_cast<std::uint64_t>(deg)) : naive_cover(target);
    FreeModule<K> p{cat, cov.objects};
    std::vector<Vec<K>> images;
    if (deg == 0) {
      images = cov.elements;
      res.augmentation = images;
    } else {
      for (std::size_t j = 0; j < cov.objects.size(); ++j) images.push_back(embed[cov.objects[j]].apply(cov.elements[j]));
      res.differentials.push_back(images);
    }
    res.terms.push_back(p);
    if (deg == length || p.gens.empty()) break;
    // kernel of P -> target, as a module
    std::vector<Matrix<K>> kernels(n);
    std::vector<std::vector<std::size_t>> coords(n);
    std::vector<std::size_t> dims(n);
    for (std::size_t y = 0; y < n; ++y) {
      Matrix<K> eps = free_to_module_matrix(p, cov.elements, target, y);
      kernels[y] = kernel_basis(eps);
      coords[y] = free_columns(eps);
      dims[y] = kernels[y].cols();
    }
    FDModule<K> ker(cat, dims);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (dims[x] == 0 || dims[y] == 0) continue;
        for (std::size_t f = 0; f < cat->hom_dim(x, y); ++f) {
          Matrix<K> moved = p.action(x, y, f) * kernels[y];
          Matrix<K>& a = ker.action(x, y, f);
          for (std::size_t r = 0; r < dims[x]; ++r)
            for (std::size_t col = 0; col < dims[y]; ++col) a(r, col) = moved(coords[x][r], col);
        }
      }
    // generators of the next term are chosen in kernel coordinates
    embed = kernels;
    target = std::move(ker);
    if (target.total_dim() == 0) break;
  }
  return res;
}

/// Matrices of d_n at every object; used to check d∘d = 0 and exactness.
template <class K>
Matrix<K> resolution_differential_at(const Resolution<K>& r, int deg, std::size_t y) {
  return free_map_matrix(r.terms[deg], r.terms[deg - 1], r.differentials[deg - 1], y);
}

/// Cochain complex Hom(P_•, N): C^i = ⊕_j N(X_j).
template <class K>
ChainComplex<K> hom_complex(const Resolution<K>& r, const FDModule<K>& n, int top) {
  const auto& c = n.category();
  const K& k = c.field();
  std::map<int, std::size_t> dims;
  std::map<int, Matrix<K>> ds;
  auto term_dim = [&](int i) {
    if (i > r.length()) return std::size_t(0);
    std::size_t d = 0;
    for (std::size_t g : r.terms[i].gens) d += n.dim(g);
    return d;
  };
  for (int i = 0; i <= top; ++i) dims[i] = term_dim(i);
  for (int i = 0; i < top && i + 1 <= r.length(); ++i) {
    const auto& src = r.terms[i];
    const auto& dst = r.terms[i + 1];
    Matrix<K> delta(k, dims[i + 1], dims[i]);
    std::vector<std::size_t> off_src{0}, off_dst{0};
    for (std::size_t g : src.gens) off_src.push_back(off_src.back() + n.dim(g));
    for (std::size_t g : dst.gens) off_dst.push_back(off_dst.back() + n.dim(g));
    for (std::size_t j = 0; j < dst.gens.size(); ++j) {
      const std::size_t xj = dst.gens[j];
      const Vec<K>& img = r.differentials[i][j];
      auto ot = src.offsets(xj);
      for (std::size_t t = 0; t < src.gens.size(); ++t) {
        Vec<K> a(img.begin() + static_cast<std::ptrdiff_t>(ot[t]), img.begin() + static_cast<std::ptrdiff_t>(ot[t + 1]));
        if (n.dim(xj) == 0 || n.dim(src.gens[t]) == 0) continue;
        delta.add_block(off_dst[j], off_src[t], n.act(xj, src.gens[t], a), k.one());
      }
    }
    ds.emplace(i, std::move(delta));
  }
  return ChainComplex<K>(k, Orientation::Cochain, dims, ds);
}

/// dim Ext^i(M, N) for i = 0..max_deg from a resolution of M of length ≥ max_deg + 1.
template <class K>
std::map<int, std::size_t> ext_dims(const Resolution<K>& r, const FDModule<K>& n, int max_deg) {
  return homology_dims(hom_complex(r, n, max_deg + 1), 0, max_deg);
}

template <class K>
std::map<int, std::size_t> ext_dims(const FDModule<K>& m, const FDModule<K>& n, int max_deg) {
  return ext_dims(projective_resolution(m, max_deg + 1), n, max_deg);
}

/// Chain complex P_• ⊗ L for a left module L, given as a right module over
/// the opposite category (same objects and hom bases).
template <class K>
ChainComplex<K> tensor_complex(const Resolution<K>& r, const FDModule<K>& l, int top) {
  const K& k = l.field();
  std::map<int, std::size_t> dims;
  std::map<int, Matrix<K>> ds;
  auto term_dim = [&](int i) {
    if (i > r.length()) return std::size_t(0);
    std::size_t d = 0;
    for (std::size_t g : r.terms[i].gens) d += l.dim(g);
    return d;
  };
  for (int i = 0; i <= top; ++i) dims[i] = term_dim(i);
  for (int i = 1; i <= top && i <= r.length(); ++i) {
    const auto& src = r.terms[i];
    const auto& dst = r.terms[i - 1];
    Matrix<K> d(k, dims[i - 1], dims[i]);
    std::vector<std::size_t> off_src{0}, off_dst{0};
    for (std::size_t g : src.gens) off_src.push_back(off_src.back() + l.dim(g));
    for (std::size_t g : dst.gens) off_dst.push_back(off_dst.back() + l.dim(g));
    for (std::size_t j = 0; j < src.gens.size(); ++j) {
      const std::size_t xj = src.gens[j];
      const Vec<K>& img = r.differentials[i - 1][j];
      auto ot = dst.offsets(xj);
      for (std::size_t t = 0; t < dst.gens.size(); ++t) {
        if (l.dim(xj) == 0 || l.dim(dst.gens[t]) == 0) continue;
        Vec<K> a(img.begin() + static_cast<std::ptrdiff_t>(ot[t]), img.begin() + static_cast<std::ptrdiff_t>(ot[t + 1]));
        // a ∈ hom(X_j, Y_t) is op-hom(Y_t, X_j), acting L(X_j) -> L(Y_t)
        d.add_block(off_dst[t], off_src[j], l.act(dst.gens[t], xj, a), k.one());
      }
    }
    ds.emplace(i, std::move(d));
  }
  return ChainComplex<K>(k, Orientation::Chain, dims, ds);
}

template <class K>
std::map<int, std::size_t> tor_dims(const Resolution<K>& r, const FDModule<K>& l, int max_deg) {
  return homology_dims(tensor_complex(r, l, max_deg + 1), 0, max_deg);
}

template <class K>
std::map<int, std::size_t> tor_dims(const FDModule<K>& m, const FDModule<K>& l, int max_deg) {
  return tor_dims(projective_resolution(m, max_deg + 1), l, max_deg);
}

/// ⊕_x M(x) ⊗ L(x) with the relations M(f)m ⊗ l - m ⊗ L(f)l as columns.
/// The coordinate of m_i ⊗ l_j at x is offsets[x] + i * dim L(x) + j.
template <class K>
struct TensorPresentation {
  std::vector<std::size_t> offsets;
  Matrix<K> relations;

  std::size_t total() const { return offsets.back(); }
  std::size_t dim() const { return total() - rank(relations); }
};

template <class K>
TensorPresentation<K> tensor_over(const FDModule<K>& m, const FDModule<K>& l) {
  const auto& c = m.category();
  const K& k = m.field();
  const std::size_t n = c.num_objects();
  TensorPresentation<K> t;
  t.offsets.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) t.offsets[x + 1] = t.offsets[x] + m.dim(x) * l.dim(x);
  std::vector<Vec<K>> cols;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
        const Matrix<K>& mf = m.action(x, y, f);  // M(y) -> M(x)
        const Matrix<K>& lf = l.action(y, x, f);  // L(x) -> L(y)
        for (std::size_t i = 0; i < m.dim(y); ++i)
          for (std::size_t j = 0; j < l.dim(x); ++j) {
            Vec<K> v(t.total(), k.zero());
            for (std::size_t a = 0; a < m.dim(x); ++a) v[t.offsets[x] + a * l.dim(x) + j] = k.add(v[t.offsets[x] + a * l.dim(x) + j], mf(a, i));
            for (std::size_t b = 0; b < l.dim(y); ++b) v[t.offsets[y] + i * l.dim(y) + b] = k.sub(v[t.offsets[y] + i * l.dim(y) + b], lf(b, j));
            cols.push_back(std::move(v));
          }
      }
  t.relations = Matrix<K>::from_columns(k, t.total(), cols);
  return t;
}

}  // namespace cct
