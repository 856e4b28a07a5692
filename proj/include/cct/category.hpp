#pragma once

// Finite base categories: composition tables, the nerve, slices and the
// factorization category.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cct/errors.hpp"

namespace cct {

inline constexpr int kDefaultNerveCap = 6;

struct Morphism {
  std::string id;
  std::size_t src = 0;
  std::size_t dst = 0;
};

struct CategoryViolation {
  std::string path;
  std::string axiom;
  std::string detail;
};

/// A composable sequence V_0 -> V_1 -> ... -> V_n. Degree 0 chains are bare
/// objects, stored in `object`.
struct NerveChain {
  std::vector<std::size_t> arrows;
  std::size_t object = 0;

  std::size_t degree() const { return arrows.size(); }
  friend bool operator==(const NerveChain&, const NerveChain&) = default;
  friend auto operator<=>(const NerveChain&, const NerveChain&) = default;
};

/// A face of a nerve chain together with the factorization |v| = p ∘ |face| ∘ q
/// that realizes the map face -> v in Fact.
struct NerveFace {
  NerveChain chain;
  std::size_t p = 0;
  std::size_t q = 0;
};

class FiniteCategory;

/// 𝒰/W as a category in its own right plus the bookkeeping back to 𝒰.
struct SliceCategory;
/// Fact(𝒰) as a category plus, per morphism, the pair (p, q).
struct FactCategory;

class FiniteCategory {
 public:
  struct CompositionEntry {
    std::string g;
    std::string f;
    std::string gf;
  };

  FiniteCategory() = default;

  /// Objects and morphisms are re-sorted by id. The composition table may
  /// omit products with an identity; those are filled in. Unknown ids throw;
  /// everything else is left for violation() to report.
  FiniteCategory(std::vector<std::string> objects, std::vector<std::tuple<std::string, std::string, std::string>> morphisms,
                 const std::map<std::string, std::string>& identities, const std::vector<CompositionEntry>& composition) {
    std::sort(objects.begin(), objects.end());
    if (std::adjacent_find(objects.begin(), objects.end()) != objects.end())
      throw ValidationError("/base/objects", "ids", "duplicate object id");
    objects_ = std::move(objects);
    std::sort(morphisms.begin(), morphisms.end());
    for (std::size_t i = 0; i < morphisms.size(); ++i) {
      const auto& [id, s, d] = morphisms[i];
      if (i > 0 && std::get<0>(morphisms[i - 1]) == id)
        throw ValidationError("/base/morphisms", "ids", "duplicate morphism id '" + id + "'");
      morphisms_.push_back({id, find_object(s, "/base/morphisms"), find_object(d, "/base/morphisms")});
    }
    identity_.assign(objects_.size(), npos);
    for (const auto& [obj, mor] : identities) identity_[find_object(obj, "/base/identities")] = find_morphism(mor, "/base/identities");
    const std::size_t m = morphisms_.size();
    table_.assign(m * m, npos);
    for (const auto& e : composition) {
      std::size_t g = find_morphism(e.g, "/base/composition");
      std::size_t f = find_morphism(e.f, "/base/composition");
      std::size_t gf = find_morphism(e.gf, "/base/composition");
      if (table_[g * m + f] != npos && table_[g * m + f] != gf)
        conflicts_.push_back({"/base/composition", "composition", "conflicting entries for " + e.g + "∘" + e.f});
      table_[g * m + f] = gf;
    }
    for (std::size_t x = 0; x < objects_.size(); ++x) {
      std::size_t id = identity_[x];
      if (id == npos) continue;
      for (std::size_t f = 0; f < m; ++f) {
        if (morphisms_[f].dst == x && table_[id * m + f] == npos) table_[id * m + f] = f;
        if (morphisms_[f].src == x && table_[f * m + id] == npos) table_[f * m + id] = f;
      }
    }
  }

  // -- common shapes ------------------------------------------------------

  static FiniteCategory point(const std::string& object = "*") {
    return FiniteCategory({object}, {{"1_" + object, object, object}}, {{object, "1_" + object}}, {});
  }

  /// The poset generated by `relations` (pairs lo < hi), with morphism ids
  /// "lo<hi" and identities "1_x".
  static FiniteCategory poset(const std::vector<std::string>& objects,
                              const std::vector<std::pair<std::string, std::string>>& relations) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < objects.size(); ++i) index[objects[i]] = i;
    const std::size_t n = objects.size();
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
    for (const auto& [a, b] : relations) le[index.at(a)][index.at(b)] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (le[i][k] && le[k][j]) le[i][j] = true;
    auto name = [&](std::size_t i, std::size_t j) {
      return i == j ? "1_" + objects[i] : objects[i] + "<" + objects[j];
    };
    std::vector<std::tuple<std::string, std::string, std::string>> mors;
    std::map<std::string, std::string> ids;
    std::vector<CompositionEntry> comp;
    for (std::size_t i = 0; i < n; ++i) {
      ids[objects[i]] = name(i, i);
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][j]) mors.emplace_back(name(i, j), objects[i], objects[j]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (le[i][j] && le[j][k]) comp.push_back({name(j, k), name(i, j), name(i, k)});
    return FiniteCategory(objects, mors, ids, comp);
  }

  /// One object, morphisms g^0..g^{n-1} named "1", "g", "g2", ...
  static FiniteCategory cyclic_group(std::size_t n, const std::string& object = "*") {
    auto name = [](std::size_t k) { return k == 0 ? std::string("1") : k == 1 ? std::string("g") : "g" + std::to_string(k); };
    std::vector<std::tuple<std::string, std::string, std::string>> mors;
    std::vector<CompositionEntry> comp;
    for (std::size_t a = 0; a < n; ++a) {
      mors.emplace_back(name(a), object, object);
      for (std::size_t b = 0; b < n; ++b) comp.push_back({name(a), name(b), name((a + b) % n)});
    }
    return FiniteCategory({object}, mors, {{object, name(0)}}, comp);
  }

  // -- access -------------------------------------------------------------

  std::size_t num_objects() const { return objects_.size(); }
  std::size_t num_morphisms() const { return morphisms_.size(); }
  const std::string& object_id(std::size_t x) const { return objects_.at(x); }
  const std::vector<std::string>& object_ids() const { return objects_; }
  const Morphism& morphism(std::size_t f) const { return morphisms_.at(f); }
  const std::vector<Morphism>& morphisms() const { return morphisms_; }
  std::size_t src(std::size_t f) const { return morphisms_[f].src; }
  std::size_t dst(std::size_t f) const { return morphisms_[f].dst; }

  std::size_t object_index(const std::string& id) const {
    auto it = std::lower_bound(objects_.begin(), objects_.end(), id);
    if (it == objects_.end() || *it != id) throw UnknownObject("unknown object '" + id + "'");
    return static_cast<std::size_t>(it - objects_.begin());
  }
  std::size_t morphism_index(const std::string& id) const {
    auto it = std::lower_bound(morphisms_.begin(), morphisms_.end(), id,
                               [](const Morphism& m, const std::string& s) { return m.id < s; });
    if (it == morphisms_.end() || it->id != id) throw UnknownObject("unknown morphism '" + id + "'");
    return static_cast<std::size_t>(it - morphisms_.begin());
  }

  std::size_t identity(std::size_t x) const {
    if (identity_.at(x) == npos) throw ValidationError("/base/identities", "identity", "object '" + objects_[x] + "' has no identity");
    return identity_[x];
  }
  bool is_identity(std::size_t f) const { return identity_[morphisms_[f].src] == f; }

  bool composable(std::size_t g, std::size_t f) const { return morphisms_[f].dst == morphisms_[g].src; }

  /// g ∘ f.
  std::size_t compose(std::size_t g, std::size_t f) const {
    std::size_t r = table_[g * morphisms_.size() + f];
    if (r == npos) throw MathError("no composite " + morphisms_[g].id + "∘" + morphisms_[f].id);
    return r;
  }

  /// Morphisms x -> y in id order.
  std::vector<std::size_t> hom(std::size_t x, std::size_t y) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < morphisms_.size(); ++f)
      if (morphisms_[f].src == x && morphisms_[f].dst == y) out.push_back(f);
    return out;
  }

  std::vector<CompositionEntry> composition_entries() const {
    std::vector<CompositionEntry> out;
    const std::size_t m = morphisms_.size();
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t f = 0; f < m; ++f)
        if (table_[g * m + f] != npos && !is_identity(g) && !is_identity(f))
          out.push_back({morphisms_[g].id, morphisms_[f].id, morphisms_[table_[g * m + f]].id});
    return out;
  }

  // -- validation ---------------------------------------------------------

  /// First violated axiom, checked in the order: identities, table domain,
  /// src/dst of composites, identity laws, associativity.
  std::optional<CategoryViolation> violation() const {
    if (!conflicts_.empty()) return conflicts_.front();
    const std::size_t m = morphisms_.size();
    for (std::size_t x = 0; x < objects_.size(); ++x) {
      if (identity_[x] == npos)
        return CategoryViolation{"/base/identities", "identity", "object '" + objects_[x] + "' has no identity"};
      const Morphism& id = morphisms_[identity_[x]];
      if (id.src != x || id.dst != x)
        return CategoryViolation{"/base/identities", "identity", "'" + id.id + "' is not an endomorphism of '" + objects_[x] + "'"};
    }
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t f = 0; f < m; ++f) {
        std::size_t r = table_[g * m + f];
        if (composable(g, f) && r == npos)
          return CategoryViolation{"/base/composition", "totality", "missing composite " + morphisms_[g].id + "∘" + morphisms_[f].id};
        if (!composable(g, f) && r != npos)
          return CategoryViolation{"/base/composition", "domain", "composite given for non-composable " + morphisms_[g].id + "∘" + morphisms_[f].id};
        if (r != npos && (morphisms_[r].src != morphisms_[f].src || morphisms_[r].dst != morphisms_[g].dst))
          return CategoryViolation{"/base/composition", "src/dst", morphisms_[g].id + "∘" + morphisms_[f].id + " = " + morphisms_[r].id + " has the wrong endpoints"};
      }
    for (std::size_t f = 0; f < m; ++f) {
      if (table_[identity_[morphisms_[f].dst] * m + f] != f || table_[f * m + identity_[morphisms_[f].src]] != f)
        return CategoryViolation{"/base/composition", "identity law", "identity not neutral for " + morphisms_[f].id};
    }
    for (std::size_t h = 0; h < m; ++h)
      for (std::size_t g = 0; g < m; ++g) {
        if (!composable(h, g)) continue;
        for (std::size_t f = 0; f < m; ++f) {
          if (!composable(g, f)) continue;
          if (compose(h, compose(g, f)) != compose(compose(h, g), f))
            return CategoryViolation{"/base/composition", "associativity",
                                     "(" + morphisms_[h].id + ", " + morphisms_[g].id + ", " + morphisms_[f].id + ")"};
        }
      }
    return std::nullopt;
  }

  void validate() const {
    if (auto v = violation()) throw ValidationError(v->path, v->axiom, v->detail);
  }

  /// Every hom-set has at most one element and the only endomorphisms are identities.
  bool is_poset() const {
    std::map<std::pair<std::size_t, std::size_t>, int> count;
    for (std::size_t f = 0; f < morphisms_.size(); ++f) {
      if (++count[{morphisms_[f].src, morphisms_[f].dst}] > 1) return false;
      if (morphisms_[f].src == morphisms_[f].dst && !is_identity(f)) return false;
    }
    return true;
  }

  FiniteCategory opposite() const {
    std::vector<std::tuple<std::string, std::string, std::string>> mors;
    for (const auto& f : morphisms_) mors.emplace_back(f.id, objects_[f.dst], objects_[f.src]);
    std::map<std::string, std::string> ids;
    for (std::size_t x = 0; x < objects_.size(); ++x) ids[objects_[x]] = morphisms_[identity_[x]].id;
    std::vector<CompositionEntry> comp;
    const std::size_t m = morphisms_.size();
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t f = 0; f < m; ++f)
        if (table_[g * m + f] != npos) comp.push_back({morphisms_[f].id, morphisms_[g].id, morphisms_[table_[g * m + f]].id});
    return FiniteCategory(objects_, mors, ids, comp);
  }

  // -- nerve --------------------------------------------------------------

  /// All composable chains of length n, degenerate ones included, ordered
  /// lexicographically by the ids of their arrows.
  std::vector<NerveChain> nerve(int n, int cap = kDefaultNerveCap) const {
    if (n < 0) throw IndexOutOfRange("negative nerve degree");
    if (n > cap) throw CapExceeded(n, cap);
    std::vector<NerveChain> out;
    if (n == 0) {
      for (std::size_t x = 0; x < objects_.size(); ++x) out.push_back({{}, x});
      return out;
    }
    std::vector<std::size_t> current;
    extend_chains(static_cast<std::size_t>(n), current, out);
    return out;
  }

  /// Chains with no identity arrows.
  std::vector<NerveChain> normalized_nerve(int n, int cap = kDefaultNerveCap) const {
    std::vector<NerveChain> out;
    for (auto& c : nerve(n, cap))
      if (!is_degenerate(c)) out.push_back(std::move(c));
    return out;
  }

  bool is_degenerate(const NerveChain& v) const {
    return std::any_of(v.arrows.begin(), v.arrows.end(), [&](std::size_t a) { return is_identity(a); });
  }

  std::size_t chain_source(const NerveChain& v) const { return v.arrows.empty() ? v.object : src(v.arrows.front()); }
  std::size_t chain_target(const NerveChain& v) const { return v.arrows.empty() ? v.object : dst(v.arrows.back()); }

  /// |v| = v_{n-1} ∘ ... ∘ v_0, or the identity in degree 0.
  std::size_t composite(const NerveChain& v) const {
    if (v.arrows.empty()) return identity(v.object);
    std::size_t c = v.arrows.front();
    for (std::size_t i = 1; i < v.arrows.size(); ++i) c = compose(v.arrows[i], c);
    return c;
  }

  NerveFace face(const NerveChain& v, int i) const {
    const int n = static_cast<int>(v.degree());
    if (i < 0 || i > n || n == 0) throw IndexOutOfRange("face index " + std::to_string(i) + " out of range for degree " + std::to_string(n));
    NerveFace out;
    if (i == 0) {
      out.chain.arrows.assign(v.arrows.begin() + 1, v.arrows.end());
      out.chain.object = dst(v.arrows.front());
      out.p = identity(chain_target(v));
      out.q = v.arrows.front();
    } else if (i == n) {
      out.chain.arrows.assign(v.arrows.begin(), v.arrows.end() - 1);
      out.chain.object = src(v.arrows.back());
      out.p = v.arrows.back();
      out.q = identity(chain_source(v));
    } else {
      out.chain.arrows = v.arrows;
      std::size_t k = static_cast<std::size_t>(i);
      out.chain.arrows[k - 1] = compose(v.arrows[k], v.arrows[k - 1]);
      out.chain.arrows.erase(out.chain.arrows.begin() + static_cast<std::ptrdiff_t>(k));
      out.p = identity(chain_target(v));
      out.q = identity(chain_source(v));
    }
    if (!out.chain.arrows.empty()) out.chain.object = src(out.chain.arrows.front());
    return out;
  }

  /// Inserts the identity of V_i at position i.
  NerveChain degeneracy(const NerveChain& v, int i) const {
    const int n = static_cast<int>(v.degree());
    if (i < 0 || i > n) throw IndexOutOfRange("degeneracy index out of range");
    std::size_t obj = i == 0 ? chain_source(v) : dst(v.arrows[static_cast<std::size_t>(i - 1)]);
    NerveChain out = v;
    out.arrows.insert(out.arrows.begin() + i, identity(obj));
    out.object = src(out.arrows.front());
    return out;
  }

  std::string chain_label(const NerveChain& v) const {
    if (v.arrows.empty()) return objects_[v.object];
    std::string s;
    for (std::size_t i = 0; i < v.arrows.size(); ++i) s += (i ? "," : "") + morphisms_[v.arrows[i]].id;
    return "(" + s + ")";
  }

  SliceCategory slice(std::size_t apex) const;
  FactCategory fact() const;

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t find_object(const std::string& id, const std::string& path) const {
    auto it = std::lower_bound(objects_.begin(), objects_.end(), id);
    if (it == objects_.end() || *it != id) throw ValidationError(path, "ids", "unknown object '" + id + "'");
    return static_cast<std::size_t>(it - objects_.begin());
  }
  std::size_t find_morphism(const std::string& id, const std::string& path) const {
    auto it = std::lower_bound(morphisms_.begin(), morphisms_.end(), id,
                               [](const Morphism& m, const std::string& s) { return m.id < s; });
    if (it == morphisms_.end() || it->id != id) throw ValidationError(path, "ids", "unknown morphism '" + id + "'");
    return static_cast<std::size_t>(it - morphisms_.begin());
  }

  void extend_chains(std::size_t n, std::vector<std::size_t>& current, std::vector<NerveChain>& out) const {
    if (current.size() == n) {
      out.push_back({current, src(current.front())});
      return;
    }
    for (std::size_t f = 0; f < morphisms_.size(); ++f) {
      if (!current.empty() && src(f) != dst(current.back())) continue;
      current.push_back(f);
      extend_chains(n, current, out);
      current.pop_back();
    }
  }

  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<std::size_t> identity_;
  std::vector<std::size_t> table_;
  std::vector<CategoryViolation> conflicts_;
};

struct SliceCategory {
  FiniteCategory category;
  std::size_t apex = 0;
  /// Base morphism f: U -> W for each slice object.
  std::vector<std::size_t> object_arrow;
  /// Underlying base morphism for each slice morphism.
  std::vector<std::size_t> morphism_arrow;
  /// Slice object given by 1_W.
  std::size_t terminal = 0;
};

struct FactCategory {
  FiniteCategory category;
  /// Base morphism u for each Fact object.
  std::vector<std::size_t> object_arrow;
  /// (p, q) for each Fact morphism u -> u' with u' = p u q.
  std::vector<std::pair<std::size_t, std::size_t>> morphism_pq;
  /// Object index of a base morphism.
  std::vector<std::size_t> object_of_arrow;

  /// The Fact morphism u -> puq given by (p, q).
  std::size_t morphism_of(std::size_t u, std::size_t p, std::size_t q) const {
    std::size_t x = object_of_arrow.at(u);
    for (std::size_t m = 0; m < morphism_pq.size(); ++m)
      if (category.src(m) == x && morphism_pq[m] == std::make_pair(p, q)) return m;
    throw MathError("no such factorization morphism");
  }
};

inline SliceCategory FiniteCategory::slice(std::size_t apex) const {
  if (apex >= objects_.size()) throw UnknownObject("slice apex out of range");
  std::vector<std::size_t> arrows;
  for (std::size_t f = 0; f < morphisms_.size(); ++f)
    if (dst(f) == apex) arrows.push_back(f);
  std::vector<std::string> objs;
  for (std::size_t f : arrows) objs.push_back(morphisms_[f].id);
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::map<std::string, std::string> ids;
  std::map<std::string, std::size_t> base_of;
  auto name = [&](std::size_t g, std::size_t f1, std::size_t f2) {
    return morphisms_[g].id + ":" + morphisms_[f1].id + ">" + morphisms_[f2].id;
  };
  // slice morphism g: f1 -> f2 with f2 ∘ g = f1
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> triples;
  for (std::size_t f1 : arrows)
    for (std::size_t f2 : arrows)
      for (std::size_t g : hom(src(f1), src(f2)))
        if (compose(f2, g) == f1) {
          triples.emplace_back(g, f1, f2);
          mors.emplace_back(name(g, f1, f2), morphisms_[f1].id, morphisms_[f2].id);
          base_of[name(g, f1, f2)] = g;
          if (is_identity(g) && f1 == f2) ids[morphisms_[f1].id] = name(g, f1, f2);
        }
  std::vector<CompositionEntry> comp;
  for (const auto& [g, f1, f2] : triples)
    for (const auto& [h, e1, e2] : triples)
      if (e1 == f2) comp.push_back({name(h, f2, e2), name(g, f1, f2), name(compose(h, g), f1, e2)});
  SliceCategory s{FiniteCategory(objs, mors, ids, comp), apex, {}, {}, 0};
  for (const auto& id : s.category.object_ids()) s.object_arrow.push_back(morphism_index(id));
  for (const auto& m : s.category.morphisms()) s.morphism_arrow.push_back(base_of.at(m.id));
  s.terminal = s.category.object_index(morphisms_[identity(apex)].id);
  return s;
}

inline FactCategory FiniteCategory::fact() const {
  std::vector<std::string> objs;
  for (const auto& m : morphisms_) objs.push_back(m.id);
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  std::map<std::string, std::string> ids;
  std::map<std::string, std::pair<std::size_t, std::size_t>> pq_of;
  auto name = [&](std::size_t p, std::size_t q, std::size_t u) {
    return "(" + morphisms_[p].id + "," + morphisms_[q].id + "):" + morphisms_[u].id;
  };
  struct Arrow {
    std::size_t u, up, p, q;
  };
  std::vector<Arrow> arrows;
  const std::size_t m = morphisms_.size();
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t p = 0; p < m; ++p) {
      if (src(p) != dst(u)) continue;
      std::size_t pu = compose(p, u);
      for (std::size_t q = 0; q < m; ++q) {
        if (dst(q) != src(u)) continue;
        std::size_t up = compose(pu, q);
        arrows.push_back({u, up, p, q});
        std::string id = name(p, q, u);
        mors.emplace_back(id, morphisms_[u].id, morphisms_[up].id);
        pq_of[id] = {p, q};
        if (is_identity(p) && is_identity(q)) ids[morphisms_[u].id] = id;
      }
    }
  // (p', q') ∘ (p, q) = (p'p, qq')
  std::map<std::size_t, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < arrows.size(); ++i) by_source[arrows[i].u].push_back(i);
  std::vector<CompositionEntry> comp;
  for (const auto& a : arrows)
    for (std::size_t j : by_source[a.up]) {
      const auto& b = arrows[j];
      comp.push_back({name(b.p, b.q, b.u), name(a.p, a.q, a.u), name(compose(b.p, a.p), compose(a.q, b.q), a.u)});
    }
  FactCategory f{FiniteCategory(objs, mors, ids, comp), {}, {}, {}};
  for (const auto& id : f.category.object_ids()) f.object_arrow.push_back(morphism_index(id));
  for (const auto& mo : f.category.morphisms()) f.morphism_pq.push_back(pq_of.at(mo.id));
  f.object_of_arrow.assign(m, 0);
  for (std::size_t x = 0; x < f.object_arrow.size(); ++x) f.object_of_arrow[f.object_arrow[x]] = x;
  return f;
}

}  // namespace cct
