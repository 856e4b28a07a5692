#pragma once

// Small hand-built prestacks used by the tests, the acceptance run and the
// CLI generator.

#include <memory>
#include <string>
#include <vector>

#include "cct/category.hpp"
#include "cct/prestack.hpp"

namespace cct {

inline FiniteCategory a2_base() { return FiniteCategory::poset({"U", "V"}, {{"V", "U"}}); }
inline FiniteCategory square_base() {
  return FiniteCategory::poset({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
}
inline FiniteCategory a3_base() { return FiniteCategory::poset({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}}); }

/// k[x]/x^2 on one object, basis (1, x).
template <class K>
LinearCategoryPtr<K> dual_numbers(const K& k) {
  LinearCategory<K> c(k, {"*"});
  c.set_hom(0, 0, 2, {"1", "x"});
  c.set_identity(0, {{0, k.one()}});
  c.fill_products([&](std::size_t, std::size_t, std::size_t, std::size_t g, std::size_t f) -> Sparse<K> {
    if (g == 0) return {{f, k.one()}};
    if (f == 0) return {{g, k.one()}};
    return {};
  });
  return std::make_shared<const LinearCategory<K>>(std::move(c));
}

template <class K>
LinearCategoryPtr<K> ground_field(const K& k) {
  LinearCategory<K> c(k, {"*"});
  c.set_hom(0, 0, 1, {"1"});
  c.set_identity(0, {{0, k.one()}});
  c.fill_products([&](std::size_t, std::size_t, std::size_t, std::size_t, std::size_t) { return Sparse<K>{{0, k.one()}}; });
  return std::make_shared<const LinearCategory<K>>(std::move(c));
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"FIX0", "FIX1", "FIX2", "FIX3", "FIX4"};
  return names;
}

/// FIX4: A2 with A(U) = k[x]/x^2, A(V) = k and u*: x ↦ 0.
template <class K>
Prestack<K> dual_numbers_on_a2(const K& k) {
  FiniteCategory base = a2_base();
  Prestack<K> p(k, base);
  std::size_t U = base.object_index("U"), V = base.object_index("V");
  auto d = dual_numbers(k);
  auto g = ground_field(k);
  p.set_fiber(U, d);
  p.set_fiber(V, g);
  for (std::size_t u = 0; u < base.num_morphisms(); ++u) {
    if (base.is_identity(u)) {
      p.set_restriction(u, LinearFunctor<K>::identity(base.src(u) == U ? d : g));
      continue;
    }
    Matrix<K> m(k, 1, 2);
    m(0, 0) = k.one();
    p.set_restriction(u, LinearFunctor<K>{d, g, {0}, {m}});
  }
  return p;
}

/// Constant k on the chain x < y < z with c_{y<z, x<y} = 2 instead of 1.
template <class K>
Prestack<K> twisted_a3(const K& k) {
  FiniteCategory base = a3_base();
  Prestack<K> p = Prestack<K>::constant(k, base);
  p.set_coherence(base.morphism_index("y<z"), base.morphism_index("x<y"), 0, {k.from_int(2)});
  return p;
}

/// Z/3 with c_{g,g} = 2 and every other component 1; violates the cocycle law.
template <class K>
Prestack<K> broken_cocycle_z3(const K& k) {
  FiniteCategory base = FiniteCategory::cyclic_group(3);
  Prestack<K> p = Prestack<K>::constant(k, base);
  std::size_t g = base.morphism_index("g");
  p.set_coherence(g, g, 0, {k.from_int(2)});
  return p;
}

template <class K>
Prestack<K> fixture(const std::string& name, const K& k) {
  if (name == "FIX0") return Prestack<K>::constant(k, FiniteCategory::point());
  if (name == "FIX1") return Prestack<K>::constant(k, a2_base());
  if (name == "FIX2") return Prestack<K>::constant(k, square_base());
  if (name == "FIX3") return Prestack<K>::constant(k, FiniteCategory::cyclic_group(2));
  if (name == "FIX4") return dual_numbers_on_a2(k);
  if (name == "A3TW") return twisted_a3(k);
  throw UnknownObject("unknown fixture '" + name + "'");
}

}  // namespace cct
