#include <algorithm>

#include "kpzlab/error.hpp"
#include "kpzlab/toprec.hpp"

namespace kpz::toprec {

namespace {

void trim(std::vector<Rational>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

Polynomial::Polynomial(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(c); }

Polynomial Polynomial::constant(const Rational& a) { return Polynomial(std::vector<Rational>{a}); }

Polynomial Polynomial::monomial(const Rational& a, int degree) {
  std::vector<Rational> c(static_cast<std::size_t>(degree + 1), 0);
  c.back() = a;
  return Polynomial(std::move(c));
}

Rational Polynomial::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

cplx Polynomial::operator()(cplx t) const {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + it->get_d();
  return acc;
}

Polynomial Polynomial::reflected() const {
  Polynomial r = *this;
  for (std::size_t i = 1; i < r.c.size(); i += 2) r.c[i] = -r.c[i];
  return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) c[i] -= b.c[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  require(!b.is_zero(), Errc::invalid_argument, "polynomial division by zero");
  std::vector<Rational> rem = a.c;
  std::vector<Rational> quo(std::max<int>(a.degree() - b.degree() + 1, 0), 0);
  const int db = b.degree();
  for (int d = a.degree(); d >= db; --d) {
    Rational f = rem[static_cast<std::size_t>(d)] / b.c.back();
    quo[static_cast<std::size_t>(d - db)] = f;
    if (f == 0) continue;
    for (int i = 0; i <= db; ++i) rem[static_cast<std::size_t>(d - db + i)] -= f * b.c[static_cast<std::size_t>(i)];
  }
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  Rational lead = a.c.back();
  for (auto& x : a.c) x /= lead;
  return a;
}

RationalFn::RationalFn(Polynomial num, Polynomial den) {
  require(!den.is_zero(), Errc::invalid_argument, "rational function with zero denominator");
  if (num.is_zero()) {
    num_ = {};
    den_ = Polynomial::constant(1);
    return;
  }
  Polynomial g = gcd(num, den);
  num_ = divmod(num, g).first;
  den_ = divmod(den, g).first;
  Rational lead = den_.c.back();
  for (auto& x : num_.c) x /= lead;
  for (auto& x : den_.c) x /= lead;
}

Rational RationalFn::operator()(const Rational& t) const {
  Rational d = den_(t);
  require(d != 0, Errc::pole_proximity, "rational function evaluated at a pole");
  return num_(t) / d;
}

cplx RationalFn::operator()(cplx t) const { return num_(t) / den_(t); }

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}
RationalFn operator-(const RationalFn& a, const RationalFn& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}
RationalFn operator*(const RationalFn& a, const RationalFn& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
RationalFn operator/(const RationalFn& a, const RationalFn& b) {
  require(!b.is_zero(), Errc::invalid_argument, "division by the zero rational function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

std::map<int, Rational> RationalFn::laurent_at_zero(int max_power) const {
  std::map<int, Rational> out;
  if (is_zero()) return out;
  auto valuation = [](const Polynomial& p) {
    int v = 0;
    while (p.c[static_cast<std::size_t>(v)] == 0) ++v;
    return v;
  };
  const int vn = valuation(num_), vd = valuation(den_);
  const int lead = vn - vd;
  if (max_power < lead) return out;
  const int len = max_power - lead + 1;
  // (num / t^vn) / (den / t^vd) as a power series
  auto coeff = [](const Polynomial& p, int i) { return i < static_cast<int>(p.c.size()) ? p.c[static_cast<std::size_t>(i)] : Rational(0); };
  std::vector<Rational> r(static_cast<std::size_t>(len));
  const Rational d0 = den_.c[static_cast<std::size_t>(vd)];
  for (int n = 0; n < len; ++n) {
    Rational acc = coeff(num_, vn + n);
    for (int j = 1; j <= n; ++j) acc -= coeff(den_, vd + j) * r[static_cast<std::size_t>(n - j)];
    r[static_cast<std::size_t>(n)] = acc / d0;
  }
  for (int n = 0; n < len; ++n)
    if (r[static_cast<std::size_t>(n)] != 0) out[lead + n] = r[static_cast<std::size_t>(n)];
  return out;
}

Rational residue(const RationalFn& f, Point a, int max_order) {
  if (a == Point::zero) {
    if (f.is_zero()) return 0;
    int vd = 0;
    while (f.den().c[static_cast<std::size_t>(vd)] == 0) ++vd;
    require(vd <= max_order, Errc::essential_singularity, "pole order exceeds the bound");
    auto series = f.laurent_at_zero(-1);
    auto it = series.find(-1);
    return it == series.end() ? Rational(0) : it->second;
  }
  // Res_{t=inf} f dt = -Res_{u=0} f(1/u) u^{-2} du; f(1/u) = u^{dd-dn} rev(num)/rev(den)
  if (f.is_zero()) return 0;
  const int dn = f.num().degree(), dd = f.den().degree();
  require(dn - dd + 2 <= max_order, Errc::essential_singularity, "pole order at infinity exceeds the bound");
  std::vector<Rational> rn(f.num().c.rbegin(), f.num().c.rend());
  std::vector<Rational> rd(f.den().c.rbegin(), f.den().c.rend());
  // f(1/u) = u^{dd - dn} rn(u) / rd(u); residue is -[u^1] f(1/u)
  RationalFn g{Polynomial(rn), Polynomial(rd)};
  const int want = 1 + dn - dd;
  auto series = g.laurent_at_zero(want);
  auto it = series.find(want);
  return it == series.end() ? Rational(0) : Rational(-it->second);
}

RationalFn CurveChart::curve_defect() const { return y * y + z * y + RationalFn::constant(1); }

CurveChart chart() {
  const RationalFn t = RationalFn::variable();
  const RationalFn one = RationalFn::constant(1);
  CurveChart ch;
  ch.z = RationalFn::constant(2) * (one + t * t) / (t * t - one);
  ch.y = (one + t) / (one - t);
  ch.dz = RationalFn(Polynomial::monomial(-8, 1), (Polynomial({-1, 0, 1}) * Polynomial({-1, 0, 1})));
  return ch;
}

RationalFn kernel(const Rational& t1) {
  require(t1 != 0, Errc::invalid_argument, "kernel parameter must be nonzero");
  const RationalFn t = RationalFn::variable();
  const RationalFn one = RationalFn::constant(1);
  const RationalFn c = RationalFn::constant(t1);
  RationalFn frac = one / (t + c) + one / (t - c);
  RationalFn cube = (t * t - one) * (t * t - one) * (t * t - one);
  return RationalFn::constant(Rational(-1, 64)) * frac * cube / (t * t);
}

std::vector<Rational> catalan(int count) {
  std::vector<Rational> c;
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      c.push_back(1);
      continue;
    }
    Rational acc = 0;
    for (int i = 0; i < k; ++i) acc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(k - 1 - i)];
    c.push_back(acc);
  }
  return c;
}

}  // namespace kpz::toprec
