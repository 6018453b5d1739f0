#pragma once

// Truncated univariate Laurent series with exact rational coefficients.

#include <vector>

#include "kpzlab/error.hpp"
#include "kpzlab/toprec.hpp"

namespace kpz::toprec::detail {

/// sum_i c[i] u^{lo + i}, known exactly for exponents below `hi`.
struct Series {
  int lo = 0;
  int hi = 0;
  std::vector<Rational> c;

  static Series constant(const Rational& a, int hi) {
    Series s{0, hi, std::vector<Rational>(static_cast<std::size_t>(std::max(hi, 0)))};
    if (hi > 0) s.c[0] = a;
    return s;
  }

  Rational at(int power) const {
    require(power < hi, Errc::essential_singularity, "series coefficient beyond known precision");
    int i = power - lo;
    if (i < 0 || i >= static_cast<int>(c.size())) return 0;
    return c[static_cast<std::size_t>(i)];
  }

  /// Drops leading zero coefficients so c[0] != 0 (or the series is empty).
  void normalize() {
    std::size_t z = 0;
    while (z < c.size() && c[z] == 0) ++z;
    c.erase(c.begin(), c.begin() + static_cast<long>(z));
    lo += static_cast<int>(z);
    if (static_cast<int>(c.size()) > hi - lo) c.resize(static_cast<std::size_t>(std::max(hi - lo, 0)));
  }
};

inline Series operator*(const Series& a, const Series& b) {
  Series r;
  r.lo = a.lo + b.lo;
  r.hi = std::min(a.hi + b.lo, b.hi + a.lo);
  int len = std::max(r.hi - r.lo, 0);
  r.c.assign(static_cast<std::size_t>(len), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size() && static_cast<int>(i + j) < len; ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

inline Series operator+(const Series& a, const Series& b) {
  Series r;
  r.lo = std::min(a.lo, b.lo);
  r.hi = std::min(a.hi, b.hi);
  r.c.assign(static_cast<std::size_t>(std::max(r.hi - r.lo, 0)), 0);
  for (int p = r.lo; p < r.hi; ++p) r.c[static_cast<std::size_t>(p - r.lo)] = a.at(p) + b.at(p);
  return r;
}

inline Series scale(const Series& a, const Rational& s) {
  Series r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

inline Series shift(const Series& a, int k) {
  Series r = a;
  r.lo += k;
  r.hi += k;
  return r;
}

inline Series inverse(Series a) {
  a.normalize();
  require(!a.c.empty(), Errc::chart_singularity, "inverting a series that vanishes to known precision");
  const int len = a.hi - a.lo;  // relative precision is preserved
  Series r{-a.lo, -a.lo + len, std::vector<Rational>(static_cast<std::size_t>(len))};
  const Rational inv0 = 1 / a.c[0];
  for (int n = 0; n < len; ++n) {
    Rational acc = n == 0 ? Rational(1) : Rational(0);
    for (int j = 1; j <= n && j < static_cast<int>(a.c.size()); ++j)
      acc -= a.c[static_cast<std::size_t>(j)] * r.c[static_cast<std::size_t>(n - j)];
    r.c[static_cast<std::size_t>(n)] = acc * inv0;
  }
  return r;
}

inline Series power(const Series& a, int e) {
  if (e == 0) return Series::constant(1, a.hi - a.lo);
  Series base = e < 0 ? inverse(a) : a;
  Series r = base;
  for (int i = 1; i < (e < 0 ? -e : e); ++i) r = r * base;
  return r;
}

/// Square root of a power series with constant term 1.
inline Series sqrt_unit(const Series& a) {
  require(a.lo == 0 && !a.c.empty() && a.c[0] == 1, Errc::invalid_argument, "sqrt needs constant term 1");
  const int len = a.hi;
  Series r{0, len, std::vector<Rational>(static_cast<std::size_t>(len))};
  r.c[0] = 1;
  for (int n = 1; n < len; ++n) {
    Rational acc = a.at(n);
    for (int j = 1; j < n; ++j) acc -= r.c[static_cast<std::size_t>(j)] * r.c[static_cast<std::size_t>(n - j)];
    r.c[static_cast<std::size_t>(n)] = acc / 2;
  }
  return r;
}

inline Series derivative(const Series& a) {
  Series r{a.lo - 1, a.hi - 1, a.c};
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] *= (a.lo + static_cast<int>(i));
  r.normalize();
  if (r.c.empty()) r.lo = std::min(r.lo, r.hi);
  return r;
}

}  // namespace kpz::toprec::detail
