#pragma once

// Independent reference computations used to check the main pipeline. They
// share only the exact linear algebra with the library.

#include <functional>
#include <map>
#include <vector>

#include "cct/chain_complex.hpp"
#include "cct/errors.hpp"
#include "cct/matrix.hpp"

namespace oracle {

using cct::Matrix;
using cct::Vec;

/// H^n(Z/m; k) with trivial coefficients from inhomogeneous bar cochains
/// C^n = Maps(G^n, k).
template <class K>
std::map<int, std::size_t> cyclic_group_cohomology(const K& k, std::size_t m, int max_deg) {
  auto power = [&](int n) {
    std::size_t p = 1;
    for (int i = 0; i < n; ++i) p *= m;
    return p;
  };
  std::map<int, std::size_t> dims;
  std::map<int, Matrix<K>> ds;
  for (int n = 0; n <= max_deg + 1; ++n) dims[n] = power(n);
  for (int n = 0; n <= max_deg; ++n) {
    // (δf)(g_1..g_{n+1}) = f(g_2..g_{n+1}) + Σ (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g_1..g_n)
    Matrix<K> d(k, power(n + 1), power(n));
    for (std::size_t t = 0; t < power(n + 1); ++t) {
      std::vector<std::size_t> g(n + 1);
      std::size_t rest = t;
      for (int i = 0; i <= n; ++i) {
        g[i] = rest % m;
        rest /= m;
      }
      auto index = [&](const std::vector<std::size_t>& h) {
        std::size_t idx = 0;
        for (int i = static_cast<int>(h.size()) - 1; i >= 0; --i) idx = idx * m + h[i];
        return idx;
      };
      for (int i = 0; i <= n + 1; ++i) {
        std::vector<std::size_t> h;
        if (i == 0) {
          h.assign(g.begin() + 1, g.end());
        } else if (i == n + 1) {
          h.assign(g.begin(), g.end() - 1);
        } else {
          for (int j = 0; j <= n; ++j) {
            if (j == i - 1) {
              h.push_back((g[j] + g[j + 1]) % m);
              ++j;
            } else {
              h.push_back(g[j]);
            }
          }
        }
        auto sign = (i % 2 == 0) ? k.one() : k.neg(k.one());
        d(t, index(h)) = k.add(d(t, index(h)), sign);
      }
    }
    ds.emplace(n, std::move(d));
  }
  return cct::homology_dims(cct::ChainComplex<K>(k, cct::Orientation::Cochain, dims, ds), 0, max_deg);
}

/// Cohomology of the order complex of a finite poset (strict chains) with
/// constant coefficients. `le(a, b)` is the order relation.
template <class K>
std::map<int, std::size_t> order_complex_cohomology(const K& k, std::size_t n, const std::function<bool(std::size_t, std::size_t)>& le, int max_deg) {
  std::vector<std::vector<std::vector<std::size_t>>> chains(max_deg + 2);
  for (std::size_t a = 0; a < n; ++a) chains[0].push_back({a});
  for (int d = 1; d <= max_deg + 1; ++d)
    for (const auto& c : chains[d - 1])
      for (std::size_t b = 0; b < n; ++b)
        if (b != c.back() && le(c.back(), b)) {
          auto e = c;
          e.push_back(b);
          chains[d].push_back(e);
        }
  std::map<int, std::size_t> dims;
  std::map<int, Matrix<K>> ds;
  for (int d = 0; d <= max_deg + 1; ++d) dims[d] = chains[d].size();
  for (int d = 0; d <= max_deg; ++d) {
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < chains[d].size(); ++i) index[chains[d][i]] = i;
    Matrix<K> m(k, chains[d + 1].size(), chains[d].size());
    for (std::size_t t = 0; t < chains[d + 1].size(); ++t)
      for (int i = 0; i <= d + 1; ++i) {
        auto f = chains[d + 1][t];
        f.erase(f.begin() + i);
        m(t, index.at(f)) = k.add(m(t, index.at(f)), (i % 2 == 0) ? k.one() : k.neg(k.one()));
      }
    ds.emplace(d, std::move(m));
  }
  return cct::homology_dims(cct::ChainComplex<K>(k, cct::Orientation::Cochain, dims, ds), 0, max_deg);
}

/// Cohomology of the nerve of a finite category with constant coefficients,
/// from cochains on all composable strings (degenerate ones included).
/// Morphisms are 0..m-1; compose(g, f) = g∘f.
template <class K>
std::map<int, std::size_t> nerve_cohomology(const K& k, std::size_t objects, std::size_t m,
                                            const std::function<std::size_t(std::size_t)>& src,
                                            const std::function<std::size_t(std::size_t)>& dst,
                                            const std::function<std::size_t(std::size_t, std::size_t)>& compose, int max_deg) {
  // a string of length n is (x_0, f_1, ..., f_n) with f_i: x_{i-1} -> x_i
  std::vector<std::vector<std::vector<std::size_t>>> strings(max_deg + 2);
  for (std::size_t x = 0; x < objects; ++x) strings[0].push_back({x});
  for (int d = 1; d <= max_deg + 1; ++d)
    for (const auto& s : strings[d - 1]) {
      std::size_t end = d == 1 ? s[0] : dst(s.back());
      for (std::size_t f = 0; f < m; ++f)
        if (src(f) == end) {
          auto t = s;
          if (d == 1) t.clear();
          t.push_back(f);
          strings[d].push_back(t);
        }
    }
  auto key = [&](std::vector<std::size_t> s, std::size_t obj) {
    if (s.empty()) s.push_back(obj);
    return s;
  };
  std::map<int, std::size_t> dims;
  std::map<int, Matrix<K>> ds;
  for (int d = 0; d <= max_deg + 1; ++d) dims[d] = strings[d].size();
  for (int d = 0; d <= max_deg; ++d) {
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < strings[d].size(); ++i) index[strings[d][i]] = i;
    Matrix<K> mat(k, strings[d + 1].size(), strings[d].size());
    for (std::size_t t = 0; t < strings[d + 1].size(); ++t) {
      const auto& s = strings[d + 1][t];
      for (int i = 0; i <= d + 1; ++i) {
        std::vector<std::size_t> f;
        std::size_t obj = 0;
        if (i == 0) {
          f.assign(s.begin() + 1, s.end());
          obj = dst(s.front());
        } else if (i == d + 1) {
          f.assign(s.begin(), s.end() - 1);
          obj = src(s.back());
        } else {
          f = s;
          f[i - 1] = compose(s[i], s[i - 1]);
          f.erase(f.begin() + i);
        }
        std::size_t j = index.at(key(f, obj));
        mat(t, j) = k.add(mat(t, j), (i % 2 == 0) ? k.one() : k.neg(k.one()));
      }
    }
    ds.emplace(d, std::move(mat));
  }
  return cct::homology_dims(cct::ChainComplex<K>(k, cct::Orientation::Cochain, dims, ds), 0, max_deg);
}

/// A finite-dimensional algebra by structure constants, mult[i][j] = b_i b_j,
/// whose basis contains a complete set of orthogonal idempotents and is
/// otherwise homogeneous (each b = e b e' for idempotents e, e').
template <class K>
struct Algebra {
  std::size_t dim = 0;
  std::vector<std::vector<Vec<K>>> mult;
  std::vector<std::size_t> idempotents;
};

/// HH^n(A, A) from the cochain complex Hom_{E-E}(r^{⊗_E n}, A), where E is
/// spanned by the idempotents and r by the other basis elements. Since E is
/// separable this computes ordinary Hochschild cohomology.
template <class K>
std::map<int, std::size_t> hochschild_cohomology(const K& k, const Algebra<K>& alg, int max_deg) {
  const std::size_t d = alg.dim;
  std::vector<std::size_t> left(d, d), right(d, d);
  std::vector<bool> is_idem(d, false);
  for (std::size_t e : alg.idempotents) is_idem[e] = true;
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t e : alg.idempotents) {
      Vec<K> unit(d, k.zero());
      unit[b] = k.one();
      if (alg.mult[e][b] == unit) left[b] = e;
      if (alg.mult[b][e] == unit) right[b] = e;
    }
  for (std::size_t b = 0; b < d; ++b)
    if (left[b] == d || right[b] == d) throw cct::MathError("basis element is not homogeneous");
  std::vector<std::size_t> rad;
  for (std::size_t b = 0; b < d; ++b)
    if (!is_idem[b]) rad.push_back(b);

  // chains[n]: tuples over rad, composable in the order a_1 a_2 ... a_n;
  // degree 0 holds one empty chain per idempotent
  struct Chain {
    std::vector<std::size_t> a;
    std::size_t l, r;
  };
  std::vector<std::vector<Chain>> chains(max_deg + 2);
  for (std::size_t e : alg.idempotents) chains[0].push_back({{}, e, e});
  if (max_deg >= 0)
    for (std::size_t b : rad) chains[1].push_back({{b}, left[b], right[b]});
  for (int n = 2; n <= max_deg + 1; ++n)
    for (const auto& c : chains[n - 1])
      for (std::size_t b : rad) {
        if (right[c.a.back()] != left[b]) continue;
        Chain t{c.a, c.l, right[b]};
        t.a.push_back(b);
        chains[n].push_back(t);
      }
  // coordinates: (chain, output basis element b with matching idempotents)
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> coord(max_deg + 2);
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> chain_index(max_deg + 2);
  std::map<int, std::size_t> dims;
  for (int n = 0; n <= max_deg + 1; ++n) {
    std::size_t count = 0;
    for (std::size_t c = 0; c < chains[n].size(); ++c) {
      const auto& ch = chains[n][c];
      chain_index[n][n == 0 ? std::vector<std::size_t>{ch.l} : ch.a] = c;
      for (std::size_t b = 0; b < d; ++b)
        if (left[b] == ch.l && right[b] == ch.r) coord[n][{c, b}] = count++;
    }
    dims[n] = count;
  }
  auto find_chain = [&](int n, const std::vector<std::size_t>& a, std::size_t idem) {
    return chain_index[n].at(n == 0 ? std::vector<std::size_t>{idem} : a);
  };
  std::map<int, Matrix<K>> ds;
  for (int n = 0; n <= max_deg; ++n) {
    Matrix<K> m(k, dims[n + 1], dims[n]);
    for (std::size_t t = 0; t < chains[n + 1].size(); ++t) {
      const auto& tc = chains[n + 1][t];
      const auto& a = tc.a;
      auto add = [&](std::size_t src_chain, std::size_t out_b, const Vec<K>& value, const typename K::value_type& sign) {
        std::size_t col = coord[n].at({src_chain, out_b});
        for (std::size_t r = 0; r < d; ++r) {
          if (k.is_zero(value[r])) continue;
          std::size_t row = coord[n + 1].at({t, r});
          k.add_mul(m(row, col), sign, value[r]);
        }
      };
      // a_1 · f(a_2 .. a_{n+1})
      {
        std::vector<std::size_t> rest(a.begin() + 1, a.end());
        std::size_t sc = find_chain(n, rest, right[a[0]]);
        for (std::size_t b = 0; b < d; ++b)
          if (coord[n].count({sc, b})) add(sc, b, alg.mult[a[0]][b], k.one());
      }
      // Σ (-1)^i f(.., a_i a_{i+1}, ..), dropping the E-part of the product
      for (int i = 1; i <= n; ++i) {
        const Vec<K>& prod = alg.mult[a[i - 1]][a[i]];
        auto sign = (i % 2 == 0) ? k.one() : k.neg(k.one());
        for (std::size_t b : rad) {
          if (k.is_zero(prod[b])) continue;
          std::vector<std::size_t> merged(a.begin(), a.begin() + (i - 1));
          merged.push_back(b);
          merged.insert(merged.end(), a.begin() + (i + 1), a.end());
          std::size_t sc = find_chain(n, merged, 0);
          for (std::size_t o = 0; o < d; ++o)
            if (coord[n].count({sc, o})) {
              Vec<K> unit(d, k.zero());
              unit[o] = prod[b];
              add(sc, o, unit, sign);
            }
        }
      }
      // (-1)^{n+1} f(a_1 .. a_n) · a_{n+1}
      {
        std::vector<std::size_t> first(a.begin(), a.end() - 1);
        std::size_t sc = find_chain(n, first, left[a.back()]);
        auto sign = ((n + 1) % 2 == 0) ? k.one() : k.neg(k.one());
        for (std::size_t b = 0; b < d; ++b)
          if (coord[n].count({sc, b})) add(sc, b, alg.mult[b][a.back()], sign);
      }
    }
    ds.emplace(n, std::move(m));
  }
  return cct::homology_dims(cct::ChainComplex<K>(k, cct::Orientation::Cochain, dims, ds), 0, max_deg);
}

}  // namespace oracle
