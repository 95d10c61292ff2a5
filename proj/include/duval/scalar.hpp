#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "duval/error.hpp"

namespace duval {

using Int = mpz_class;
using Rat = mpq_class;  // kept canonical (lowest terms, positive denominator)

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Gaussian rational a + b*i. The coefficient field of every series and
// polynomial in the library; b = 0 is the plain rational subfield.
struct Scalar {
  Rat re{0};
  Rat im{0};

  Scalar() = default;
  Scalar(long v) : re(v) {}  // NOLINT: implicit by design
  Scalar(Rat r) : re(std::move(r)) {}
  Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_rational() const { return im == 0; }
  bool is_one() const { return im == 0 && re == 1; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return {a.re + b.re, a.im + b.im}; }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return {a.re - b.re, a.im - b.im}; }
  friend Scalar operator-(const Scalar& a) { return {-a.re, -a.im}; }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
  Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
  Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

  Scalar conj() const { return {re, -im}; }
  Rat norm() const { return re * re + im * im; }  // |a|^2, rational

  Scalar inverse() const {
    if (is_zero()) fail(errc::domain, "division by zero scalar");
    Rat n = norm();
    return {re / n, -im / n};
  }

  Scalar pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar acc(1);
    Scalar base = *this;
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
};

inline Scalar scalar_i() { return Scalar(Rat(0), Rat(1)); }

// "p/q" (or "p" when q = 1); the canonical textual form round-tripped by the
// expression grammar and the CLI JSON encoding.
inline std::string rat_to_string(const Rat& r) {
  std::string s = r.get_num().get_str();
  if (r.get_den() != 1) s += "/" + r.get_den().get_str();
  return s;
}

namespace detail {

inline std::optional<Int> int_nth_root_exact(const Int& v, unsigned long n) {
  if (v < 0) return std::nullopt;
  Int root;
  int exact = mpz_root(root.get_mpz_t(), v.get_mpz_t(), n);
  if (!exact) return std::nullopt;
  return root;
}

}  // namespace detail

// Exact n-th root of a non-negative rational, if one exists in Q.
inline std::optional<Rat> rat_nth_root(const Rat& r, unsigned long n) {
  if (r < 0) return std::nullopt;
  auto num = detail::int_nth_root_exact(r.get_num(), n);
  if (!num) return std::nullopt;
  auto den = detail::int_nth_root_exact(r.get_den(), n);
  if (!den) return std::nullopt;
  Rat out(*num, *den);
  out.canonicalize();
  return out;
}

// Square root inside Q(i) when it exists: for a+bi with b != 0 the root is
// c+di with c^2 = (a + |a+bi|)/2, d = b/(2c), which keeps everything rational
// exactly when |a+bi| and that half-sum are rational squares.
inline std::optional<Scalar> scalar_sqrt(const Scalar& s) {
  if (s.is_zero()) return Scalar(0);
  if (s.im == 0) {
    if (s.re > 0) {
      auto r = rat_nth_root(s.re, 2);
      if (r) return Scalar(*r);
      return std::nullopt;
    }
    auto r = rat_nth_root(Rat(-s.re), 2);
    if (r) return Scalar(Rat(0), *r);
    return std::nullopt;
  }
  auto t = rat_nth_root(s.norm(), 2);
  if (!t) return std::nullopt;
  Rat half = (s.re + *t) / 2;
  auto c = rat_nth_root(half, 2);
  if (!c || *c == 0) {
    half = (s.re - *t) / 2;  // the other branch of |.|
    c = rat_nth_root(-half, 2);
    if (!c || *c == 0) return std::nullopt;
    Rat d = s.im / (2 * *c);
    Scalar cand(d, *c);  // (d + c i) with (d+ci)^2 = s handled below
    if (cand * cand == s) return cand;
    return std::nullopt;
  }
  Rat d = s.im / (2 * *c);
  Scalar cand(*c, d);
  if (cand * cand == s) return cand;
  return std::nullopt;
}

// n-th root inside Q(i) when extractable by the closed forms this field
// admits: rational radicands (with i absorbing a minus sign when n ≡ 2 mod 4),
// iterated square roots, and odd roots of negative rationals.
inline std::optional<Scalar> scalar_nth_root(const Scalar& s, unsigned long n) {
  if (n == 0) fail(errc::domain, "0th root");
  if (n == 1) return s;
  if (s.is_zero()) return Scalar(0);
  if (n % 2 == 0) {
    auto half = scalar_sqrt(s);
    if (!half) return std::nullopt;
    auto r = scalar_nth_root(*half, n / 2);
    if (r) return r;
    r = scalar_nth_root(-*half, n / 2);
    if (r) return r;
    return std::nullopt;
  }
  if (s.im == 0) {
    if (s.re >= 0) {
      auto r = rat_nth_root(s.re, n);
      if (r) return Scalar(*r);
      return std::nullopt;
    }
    auto r = rat_nth_root(Rat(-s.re), n);
    if (r) return Scalar(Rat(-*r));
    return std::nullopt;
  }
  // Odd roots of properly complex Gaussian rationals: only resolvable here
  // when s = w^n for w with small the same shape; try w = u*(1+i)-free forms.
  // Purely imaginary case: i^(1/n) for odd n is i^k with k*n ≡ 1 (mod 4).
  if (s.re == 0) {
    unsigned long k = n % 4;  // i = (i^k)^n requires k*n ≡ 1 mod 4; n odd: k = n^-1 mod 4
    unsigned long inv = (k == 1) ? 1 : 3;  // n ≡ 1 -> 1, n ≡ 3 -> 3
    auto mag = rat_nth_root(s.im > 0 ? s.im : Rat(-s.im), n);
    if (!mag) return std::nullopt;
    Scalar unit = scalar_i().pow(static_cast<long>(inv));
    if (s.im < 0) unit = unit.conj();
    Scalar cand = Scalar(*mag) * unit;
    if (cand.pow(static_cast<long>(n)) == s) return cand;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace duval
