#pragma once

#include <map>
#include <string>

#include "cct/matrix.hpp"

namespace cct {

enum class Orientation { Chain, Cochain };

/// A bounded complex of finite-dimensional vector spaces. For a chain
/// complex differential(n) maps degree n to n-1, for a cochain complex
/// degree n to n+1. Construction asserts d∘d = 0.
template <class K>
class ChainComplex {
 public:
  ChainComplex(K field, Orientation orientation, std::map<int, std::size_t> dims,
               std::map<int, Matrix<K>> differentials)
      : field_(std::move(field)),
        orientation_(orientation),
        dims_(std::move(dims)),
        differentials_(std::move(differentials)) {
    for (const auto& [n, d] : differentials_) {
      if (d.cols() != dim(n) || d.rows() != dim(target(n)))
        throw MathError("differential in degree " + std::to_string(n) + " has the wrong shape");
    }
    for (const auto& [n, d] : differentials_) {
      auto next = differentials_.find(target(n));
      if (next == differentials_.end()) continue;
      if (!(next->second * d).is_zero())
        throw MathError("d∘d ≠ 0 at degree " + std::to_string(n));
    }
  }

  const K& field() const { return field_; }
  Orientation orientation() const { return orientation_; }
  int target(int n) const { return orientation_ == Orientation::Chain ? n - 1 : n + 1; }
  int source_of_incoming(int n) const { return orientation_ == Orientation::Chain ? n + 1 : n - 1; }

  std::size_t dim(int n) const {
    auto it = dims_.find(n);
    return it == dims_.end() ? 0 : it->second;
  }
  const std::map<int, std::size_t>& dims() const { return dims_; }
  const std::map<int, Matrix<K>>& differentials() const { return differentials_; }
  bool has_differential(int n) const { return differentials_.count(n) != 0; }

  /// The differential leaving degree n; a zero matrix when one side is zero.
  Matrix<K> differential(int n) const {
    auto it = differentials_.find(n);
    if (it != differentials_.end()) return it->second;
    if (dim(n) == 0 || dim(target(n)) == 0) return Matrix<K>(field_, dim(target(n)), dim(n));
    throw MissingDifferential(n);
  }

 private:
  K field_;
  Orientation orientation_;
  std::map<int, std::size_t> dims_;
  std::map<int, Matrix<K>> differentials_;
};

/// dim H_n = dim ker(outgoing) - rank(incoming) for n in [lo, hi].
template <class K>
std::map<int, std::size_t> homology_dims(const ChainComplex<K>& c, int lo, int hi) {
  std::map<int, std::size_t> out;
  for (int n = lo; n <= hi; ++n) {
    std::size_t outgoing_rank = rank(c.differential(n));
    std::size_t incoming_rank = rank(c.differential(c.source_of_incoming(n)));
    std::size_t kernel = c.dim(n) - outgoing_rank;
    if (incoming_rank > kernel) throw MathError("image exceeds kernel: not a complex");
    out[n] = kernel - incoming_rank;
  }
  return out;
}

}  // namespace cct
