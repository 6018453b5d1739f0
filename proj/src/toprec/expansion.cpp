#include <map>

#include "kpzlab/error.hpp"
#include "kpzlab/toprec.hpp"
#include "series.hpp"

namespace kpz::toprec {

namespace {

using detail::Series;

// t(u) at z = 1/u: -sqrt((1 + 2u) / (1 - 2u)) on the physical sheet, the
// opposite root on the reflected one.
Series t_of_u(int hi, Sheet sheet) {
  Series num{0, hi, std::vector<Rational>(static_cast<std::size_t>(hi))};
  Series den = num;
  num.c[0] = 1;
  den.c[0] = 1;
  if (hi > 1) {
    num.c[1] = 2;
    den.c[1] = -2;
  }
  Series r = detail::sqrt_unit(num * detail::inverse(den));
  return sheet == Sheet::physical ? detail::scale(r, -1) : r;
}

Series evaluate(const Polynomial& p, const Series& t) {
  Series acc = Series::constant(0, t.hi);
  for (int i = p.degree(); i >= 0; --i) acc = acc * t + Series::constant(p.c[static_cast<std::size_t>(i)], t.hi);
  return acc;
}

// Per-exponent series t(u)^e t'(u) (-u^2) = coefficient of dz for f = t^e.
class Expander {
 public:
  Expander(int order, Sheet sheet) : order_(order), t_(t_of_u(order + 8, sheet)), dt_(detail::derivative(t_)) {}

  // [u^{m+1}] for m = 0..order, after checking regularity.
  const std::vector<Rational>& coeffs(int e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(e, from_series(detail::power(t_, e) * dt_)).first->second;
  }

  std::vector<Rational> from_series(const Series& f_dt) const {
    // dz = -du / u^2, and one more sign from the per-variable normalisation.
    Series s = detail::shift(f_dt, 2);
    for (int p = s.lo; p <= 0; ++p)
      require(s.at(p) == 0, Errc::chart_singularity, "differential is singular at z = inf on this sheet");
    std::vector<Rational> out(static_cast<std::size_t>(order_ + 1));
    for (int m = 0; m <= order_; ++m) out[static_cast<std::size_t>(m)] = s.at(m + 1);
    return out;
  }

  const Series& t() const { return t_; }
  const Series& dt() const { return dt_; }

 private:
  int order_;
  Series t_, dt_;
  std::map<int, std::vector<Rational>> cache_;
};

}  // namespace

std::vector<Laurent> expansion_coeffs(const MultiDiff& w, int variable, int order, Sheet sheet) {
  require(order >= 0, Errc::invalid_argument, "order must be nonnegative");
  require(order <= 20, Errc::out_of_range, "expansion order limited to 20");
  require(variable >= 0 && variable < w.k, Errc::invalid_argument, "variable index out of range");
  require(!(w.g == 0 && w.k == 2), Errc::invalid_argument, "W_{0,2} has no termwise expansion");
  Expander ex(order, sheet);
  std::vector<Laurent> out(static_cast<std::size_t>(order + 1));
  if (w.g == 0 && w.k == 1) {
    const CurveChart ch = chart();
    const RationalFn f = ch.y * ch.dz;
    Series s = evaluate(f.num(), ex.t()) * detail::inverse(evaluate(f.den(), ex.t())) * ex.dt();
    auto c = ex.from_series(s);
    for (int m = 0; m <= order; ++m)
      if (c[static_cast<std::size_t>(m)] != 0) out[static_cast<std::size_t>(m)][{}] = c[static_cast<std::size_t>(m)];
    return out;
  }
  for (const auto& [e, c] : w.poly) {
    const auto& cs = ex.coeffs(e[static_cast<std::size_t>(variable)]);
    std::vector<int> rest;
    for (int i = 0; i < w.k; ++i)
      if (i != variable) rest.push_back(e[static_cast<std::size_t>(i)]);
    for (int m = 0; m <= order; ++m) {
      const Rational v = c * cs[static_cast<std::size_t>(m)];
      if (v == 0) continue;
      auto& slot = out[static_cast<std::size_t>(m)][rest];
      slot += v;
      if (slot == 0) out[static_cast<std::size_t>(m)].erase(rest);
    }
  }
  return out;
}

std::vector<Rational> expansion_coeffs(const MultiDiff& w, int order, Sheet sheet) {
  require(w.k == 1, Errc::invalid_argument, "scalar expansion needs k = 1");
  auto terms = expansion_coeffs(w, 0, order, sheet);
  std::vector<Rational> out;
  for (const auto& t : terms) {
    auto it = t.find({});
    out.push_back(it == t.end() ? Rational(0) : it->second);
  }
  return out;
}

std::map<std::vector<int>, Rational> expansion_all(const MultiDiff& w, int order) {
  require(order >= 0, Errc::invalid_argument, "order must be nonnegative");
  require(order <= 20, Errc::out_of_range, "expansion order limited to 20");
  require(!w.is_base(), Errc::invalid_argument, "expansion_all applies to stable W");
  Expander ex(order, Sheet::physical);
  std::map<std::vector<int>, Rational> out;
  const int k = w.k;
  for (const auto& [e, c] : w.poly) {
    std::vector<const std::vector<Rational>*> cs;
    for (int i = 0; i < k; ++i) cs.push_back(&ex.coeffs(e[static_cast<std::size_t>(i)]));
    std::vector<int> m(static_cast<std::size_t>(k), 0);
    while (true) {
      Rational v = c;
      for (int i = 0; i < k && v != 0; ++i) v *= (*cs[static_cast<std::size_t>(i)])[static_cast<std::size_t>(m[static_cast<std::size_t>(i)])];
      if (v != 0) out[m] += v;
      int i = 0;
      while (i < k && ++m[static_cast<std::size_t>(i)] > order) m[static_cast<std::size_t>(i++)] = 0;
      if (i == k) break;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace kpz::toprec
