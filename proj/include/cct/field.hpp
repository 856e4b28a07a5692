#pragma once

// Coefficient fields. Every algorithm in the library is a template over a
// field type K exposing value_type and the arithmetic below; nothing rounds.

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "cct/errors.hpp"

namespace cct {

/// The rationals, backed by GMP fractions kept in lowest terms.
struct Rationals {
  using value_type = mpq_class;

  value_type zero() const { return value_type(0); }
  value_type one() const { return value_type(1); }
  value_type from_int(long long n) const {
    return value_type(static_cast<long>(n));
  }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const {
    if (is_zero(a)) throw MathError("division by zero");
    return 1 / a;
  }
  /// acc += a * b
  void add_mul(value_type& acc, const value_type& a, const value_type& b) const { acc += a * b; }

  /// Accepts "n" or "n/d".
  value_type parse(std::string_view s) const {
    value_type q;
    if (q.set_str(std::string(s), 10) != 0 || q.get_den() == 0)
      throw ParseError("not a rational number: '" + std::string(s) + "'");
    q.canonicalize();
    return q;
  }
  std::string format(const value_type& a) const { return a.get_str(); }

  std::string name() const { return "Q"; }
  long long characteristic() const { return 0; }
  bool operator==(const Rationals&) const { return true; }
};

/// The prime field F_p with p < 2^31, residues stored in [0, p).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  /// F_2; only so that containers of matrices can be default-constructed.
  PrimeField() : p_(2) {}
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw ValidationError("/field/p", "field", std::to_string(p) + " is not prime");
    if (p >= (1u << 31)) throw ValidationError("/field/p", "field", "p must be below 2^31");
  }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  std::uint32_t p() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p_; }
  value_type from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }

  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == one(); }
  bool equal(value_type a, value_type b) const { return a == b; }

  value_type add(value_type a, value_type b) const {
    std::uint64_t s = std::uint64_t(a) + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p_ - b); }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((std::uint64_t(a) * b) % p_);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type inv(value_type a) const {
    if (a == 0) throw MathError("division by zero");
    // Fermat: a^(p-2)
    std::uint64_t base = a, result = 1, e = p_ - 2;
    while (e) {
      if (e & 1) result = (result * base) % p_;
      base = (base * base) % p_;
      e >>= 1;
    }
    return static_cast<value_type>(result);
  }
  void add_mul(value_type& acc, value_type a, value_type b) const { acc = add(acc, mul(a, b)); }

  value_type parse(std::string_view s) const {
    if (s.empty()) throw ParseError("empty residue");
    bool negative = s.front() == '-';
    if (negative) s.remove_prefix(1);
    std::uint64_t v = 0;
    if (s.empty()) throw ParseError("empty residue");
    for (char c : s) {
      if (c < '0' || c > '9') throw ParseError("not a decimal residue: '" + std::string(s) + "'");
      v = (v * 10 + static_cast<unsigned>(c - '0')) % p_;
    }
    auto r = static_cast<value_type>(v);
    return negative ? neg(r) : r;
  }
  std::string format(value_type a) const { return std::to_string(a); }

  std::string name() const { return "F" + std::to_string(p_); }
  long long characteristic() const { return p_; }
  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

}  // namespace cct
