#pragma once

// Finite-dimensional k-linear categories given by structure constants, and
// linear functors between them.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cct/category.hpp"
#include "cct/errors.hpp"
#include "cct/matrix.hpp"

namespace cct {

template <class K>
using Sparse = std::vector<std::pair<std::size_t, typename K::value_type>>;

template <class K>
Vec<K> to_dense(const K& k, const Sparse<K>& s, std::size_t n) {
  Vec<K> v(n, k.zero());
  for (const auto& [i, x] : s) v[i] = k.add(v[i], x);
  return v;
}

template <class K>
Sparse<K> to_sparse(const K& k, const Vec<K>& v) {
  Sparse<K> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!k.is_zero(v[i])) s.emplace_back(i, v[i]);
  return s;
}

template <class K>
Vec<K> unit_vector(const K& k, std::size_t n, std::size_t i) {
  Vec<K> v(n, k.zero());
  v[i] = k.one();
  return v;
}

template <class K>
class LinearCategory {
 public:
  using value_type = typename K::value_type;

  LinearCategory() = default;
  LinearCategory(K field, std::vector<std::string> objects)
      : field_(std::move(field)), objects_(std::move(objects)) {
    const std::size_t n = objects_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (!index_.emplace(objects_[i], i).second) throw ValidationError("objects", "ids", "duplicate object '" + objects_[i] + "'");
    dims_.assign(n * n, 0);
    labels_.assign(n * n, {});
    identities_.assign(n, {});
    products_.assign(n * n * n, {});
  }

  const K& field() const { return field_; }
  std::size_t num_objects() const { return objects_.size(); }
  const std::string& object_id(std::size_t x) const { return objects_.at(x); }
  const std::vector<std::string>& object_ids() const { return objects_; }
  std::size_t object_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownObject("unknown object '" + id + "'");
    return it->second;
  }

  std::size_t hom_dim(std::size_t x, std::size_t y) const { return dims_[x * objects_.size() + y]; }
  const std::vector<std::string>& hom_labels(std::size_t x, std::size_t y) const { return labels_[x * objects_.size() + y]; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto d : dims_) s += d;
    return s;
  }

  void set_hom(std::size_t x, std::size_t y, std::size_t dim, std::vector<std::string> labels = {}) {
    dims_[x * objects_.size() + y] = dim;
    labels_[x * objects_.size() + y] = std::move(labels);
  }
  void set_identity(std::size_t x, Sparse<K> id) { identities_[x] = std::move(id); }

  /// g ∘ f for basis elements g of hom(y, z) and f of hom(x, y).
  void set_product(std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f, Sparse<K> gf) {
    auto& t = table(x, y, z);
    t[g * hom_dim(x, y) + f] = std::move(gf);
  }

  /// Calls fn(x, y, z, g, f) for every pair of basis elements and stores the result.
  template <class Fn>
  void fill_products(Fn&& fn) {
    const std::size_t n = objects_.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (hom_dim(x, y) == 0) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (hom_dim(y, z) == 0 || hom_dim(x, z) == 0) continue;
          for (std::size_t g = 0; g < hom_dim(y, z); ++g)
            for (std::size_t f = 0; f < hom_dim(x, y); ++f) set_product(x, y, z, g, f, fn(x, y, z, g, f));
        }
      }
  }

  const Sparse<K>& identity_sparse(std::size_t x) const { return identities_[x]; }
  Vec<K> identity(std::size_t x) const { return to_dense(field_, identities_[x], hom_dim(x, x)); }

  const Sparse<K>& product(std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f) const {
    static const Sparse<K> empty;
    const auto& t = products_[(x * objects_.size() + y) * objects_.size() + z];
    if (t.empty()) return empty;
    return t[g * hom_dim(x, y) + f];
  }

  /// g ∘ f for g in hom(y, z), f in hom(x, y).
  Vec<K> compose(std::size_t x, std::size_t y, std::size_t z, const Vec<K>& g, const Vec<K>& f) const {
    Vec<K> out(hom_dim(x, z), field_.zero());
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (field_.is_zero(g[i])) continue;
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (field_.is_zero(f[j])) continue;
        value_type s = field_.mul(g[i], f[j]);
        for (const auto& [r, c] : product(x, y, z, i, j)) field_.add_mul(out[r], s, c);
      }
    }
    return out;
  }

  /// Matrix of g ↦ g ∘ f on hom(y, z) -> hom(x, z).
  Matrix<K> right_mult(std::size_t x, std::size_t y, std::size_t z, const Vec<K>& f) const {
    Matrix<K> m(field_, hom_dim(x, z), hom_dim(y, z));
    for (std::size_t g = 0; g < hom_dim(y, z); ++g)
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (field_.is_zero(f[j])) continue;
        for (const auto& [r, c] : product(x, y, z, g, j)) field_.add_mul(m(r, g), f[j], c);
      }
    return m;
  }

  /// Matrix of f ↦ g ∘ f on hom(x, y) -> hom(x, z).
  Matrix<K> left_mult(std::size_t x, std::size_t y, std::size_t z, const Vec<K>& g) const {
    Matrix<K> m(field_, hom_dim(x, z), hom_dim(x, y));
    for (std::size_t f = 0; f < hom_dim(x, y); ++f)
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (field_.is_zero(g[i])) continue;
        for (const auto& [r, c] : product(x, y, z, i, f)) field_.add_mul(m(r, f), g[i], c);
      }
    return m;
  }

  /// Inverse of an element of hom(x, y), if it has one.
  std::optional<Vec<K>> inverse_of(std::size_t x, std::size_t y, const Vec<K>& f) const {
    // solve f ∘ g = 1_y for g in hom(y, x), then confirm g ∘ f = 1_x
    Matrix<K> lm = left_mult(y, x, y, f);
    auto g = solve(lm, identity(y));
    if (!g) return std::nullopt;
    Vec<K> back = compose(x, y, x, *g, f);
    if (back != identity(x)) return std::nullopt;
    return g;
  }

  /// First failure of the identity or associativity laws on basis elements.
  std::optional<std::string> violation() const {
    const std::size_t n = objects_.size();
    for (std::size_t x = 0; x < n; ++x) {
      if (hom_dim(x, x) == 0) return "object '" + objects_[x] + "' has a zero endomorphism space";
      Vec<K> id = identity(x);
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t f = 0; f < hom_dim(x, y); ++f) {
          Vec<K> e = unit_vector(field_, hom_dim(x, y), f);
          if (compose(x, x, y, e, id) != e) return "identity of '" + objects_[x] + "' is not a right unit for basis " + std::to_string(f) + " of (" + objects_[x] + ", " + objects_[y] + ")";
        }
        for (std::size_t f = 0; f < hom_dim(y, x); ++f) {
          Vec<K> e = unit_vector(field_, hom_dim(y, x), f);
          if (compose(y, x, x, id, e) != e) return "identity of '" + objects_[x] + "' is not a left unit for basis " + std::to_string(f) + " of (" + objects_[y] + ", " + objects_[x] + ")";
        }
      }
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (hom_dim(x, y) == 0) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (hom_dim(y, z) == 0) continue;
          for (std::size_t w = 0; w < n; ++w) {
            if (hom_dim(z, w) == 0) continue;
            for (std::size_t h = 0; h < hom_dim(z, w); ++h)
              for (std::size_t g = 0; g < hom_dim(y, z); ++g) {
                Vec<K> hv = unit_vector(field_, hom_dim(z, w), h);
                Vec<K> hg = compose(y, z, w, hv, unit_vector(field_, hom_dim(y, z), g));
                for (std::size_t f = 0; f < hom_dim(x, y); ++f) {
                  Vec<K> fv = unit_vector(field_, hom_dim(x, y), f);
                  Vec<K> gf = to_dense(field_, product(x, y, z, g, f), hom_dim(x, z));
                  if (compose(x, z, w, hv, gf) != compose(x, y, w, hg, fv))
                    return "associativity fails on basis (" + std::to_string(h) + ", " + std::to_string(g) + ", " + std::to_string(f) + ") over objects (" +
                           objects_[x] + ", " + objects_[y] + ", " + objects_[z] + ", " + objects_[w] + ")";
                }
              }
          }
        }
      }
    return std::nullopt;
  }

  void validate(const std::string& path = "linear category") const {
    if (auto v = violation()) throw ValidationError(path, "linear category", *v);
  }

  LinearCategory opposite() const {
    LinearCategory op(field_, objects_);
    const std::size_t n = objects_.size();
    for (std::size_t x = 0; x < n; ++x) {
      op.set_identity(x, identities_[x]);
      for (std::size_t y = 0; y < n; ++y) op.set_hom(y, x, hom_dim(x, y), hom_labels(x, y));
    }
    // in the opposite, g ∘op f for g ∈ op(y,z) = C(z,y), f ∈ op(x,y) = C(y,x) is f ∘ g in C
    op.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f) { return product(z, y, x, f, g); });
    return op;
  }

  /// One basis element per morphism; hom bases in the id order of the category.
  static LinearCategory linearize(const K& field, const FiniteCategory& c) {
    LinearCategory lin(field, c.object_ids());
    const std::size_t n = c.num_objects();
    std::vector<std::size_t> position(c.num_morphisms());
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        auto h = c.hom(x, y);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < h.size(); ++i) {
          position[h[i]] = i;
          labels.push_back(c.morphism(h[i]).id);
        }
        lin.set_hom(x, y, h.size(), labels);
      }
    for (std::size_t x = 0; x < n; ++x) lin.set_identity(x, {{position[c.identity(x)], field.one()}});
    lin.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f) {
      std::size_t gm = c.hom(y, z)[g], fm = c.hom(x, y)[f];
      return Sparse<K>{{position[c.compose(gm, fm)], field.one()}};
    });
    return lin;
  }

 private:
  std::vector<Sparse<K>>& table(std::size_t x, std::size_t y, std::size_t z) {
    auto& t = products_[(x * objects_.size() + y) * objects_.size() + z];
    if (t.empty()) t.assign(hom_dim(y, z) * hom_dim(x, y), {});
    return t;
  }

  K field_{};
  std::vector<std::string> objects_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<Sparse<K>> identities_;
  std::vector<std::vector<Sparse<K>>> products_;
};

template <class K>
using LinearCategoryPtr = std::shared_ptr<const LinearCategory<K>>;

/// Position of a base morphism inside its hom basis of the linearization.
inline std::size_t linear_basis_index(const FiniteCategory& c, std::size_t f) {
  auto h = c.hom(c.src(f), c.dst(f));
  return static_cast<std::size_t>(std::find(h.begin(), h.end(), f) - h.begin());
}

template <class K>
struct LinearFunctor {
  LinearCategoryPtr<K> source;
  LinearCategoryPtr<K> target;
  std::vector<std::size_t> object_map;
  /// hom_matrix[x * n + y]: source hom(x, y) -> target hom(Fx, Fy)
  std::vector<Matrix<K>> hom_matrix;

  const Matrix<K>& map(std::size_t x, std::size_t y) const { return hom_matrix[x * source->num_objects() + y]; }

  std::optional<std::string> violation() const {
    const auto& s = *source;
    const auto& t = *target;
    const std::size_t n = s.num_objects();
    for (std::size_t x = 0; x < n; ++x)
      if (map(x, x).apply(s.identity(x)) != t.identity(object_map[x]))
        return "identity of '" + s.object_id(x) + "' not preserved";
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (s.hom_dim(x, y) == 0) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (s.hom_dim(y, z) == 0) continue;
          const Matrix<K>& fxy = map(x, y);
          const Matrix<K>& fyz = map(y, z);
          const Matrix<K>& fxz = map(x, z);
          for (std::size_t g = 0; g < s.hom_dim(y, z); ++g)
            for (std::size_t f = 0; f < s.hom_dim(x, y); ++f) {
              Vec<K> lhs = fxz.apply(to_dense(s.field(), s.product(x, y, z, g, f), s.hom_dim(x, z)));
              Vec<K> rhs = t.compose(object_map[x], object_map[y], object_map[z], fyz.column(g), fxy.column(f));
              if (lhs != rhs)
                return "composition not preserved on basis (" + std::to_string(g) + ", " + std::to_string(f) + ") over (" + s.object_id(x) + ", " +
                       s.object_id(y) + ", " + s.object_id(z) + ")";
            }
        }
      }
    return std::nullopt;
  }

  void validate(const std::string& path = "functor") const {
    if (auto v = violation()) throw ValidationError(path, "functor", *v);
  }

  static LinearFunctor identity(const LinearCategoryPtr<K>& c) {
    LinearFunctor f{c, c, {}, {}};
    const std::size_t n = c->num_objects();
    for (std::size_t x = 0; x < n; ++x) f.object_map.push_back(x);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) f.hom_matrix.push_back(Matrix<K>::identity(c->field(), c->hom_dim(x, y)));
    return f;
  }

  /// The same functor between opposite categories.
  LinearFunctor opposite(const LinearCategoryPtr<K>& source_op, const LinearCategoryPtr<K>& target_op) const {
    LinearFunctor f{source_op, target_op, object_map, {}};
    const std::size_t n = source->num_objects();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) f.hom_matrix.push_back(map(y, x));
    return f;
  }
};

}  // namespace cct
