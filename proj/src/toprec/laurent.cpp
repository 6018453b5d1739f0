#include <algorithm>
#include <sstream>

#include "kpzlab/error.hpp"
#include "kpzlab/toprec.hpp"

namespace kpz::toprec {

namespace {

Rational ipow(const Rational& x, int e) {
  Rational base = e < 0 ? Rational(1 / x) : x;
  Rational r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return r;
}

}  // namespace

Rational MultiDiff::evaluate(const std::vector<Rational>& t) const {
  require(static_cast<int>(t.size()) == k, Errc::invalid_argument, "wrong number of arguments");
  for (const auto& x : t) require(x != 0, Errc::pole_proximity, "W evaluated at a branch point");
  if (g == 0 && k == 1) return chart().y(t[0]) * chart().dz(t[0]);
  if (g == 0 && k == 2) {
    require(t[0] != t[1], Errc::pole_proximity, "Bergman kernel on the diagonal");
    Rational d = t[0] - t[1];
    return 1 / (d * d);
  }
  Rational acc = 0;
  for (const auto& [e, c] : poly) {
    Rational term = c;
    for (int i = 0; i < k; ++i) term *= ipow(t[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
    acc += term;
  }
  return acc;
}

cplx MultiDiff::evaluate(const std::vector<cplx>& t) const {
  require(static_cast<int>(t.size()) == k, Errc::invalid_argument, "wrong number of arguments");
  if (g == 0 && k == 1) return chart().y(t[0]) * chart().dz(t[0]);
  if (g == 0 && k == 2) return 1.0 / ((t[0] - t[1]) * (t[0] - t[1]));
  cplx acc = 0.0;
  for (const auto& [e, c] : poly) {
    cplx term = c.get_d();
    for (int i = 0; i < k; ++i) term *= std::pow(t[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
    acc += term;
  }
  return acc;
}

std::pair<int, int> MultiDiff::degree_range(int variable) const {
  require(variable >= 0 && variable < k, Errc::invalid_argument, "variable index out of range");
  require(!is_base(), Errc::invalid_argument, "degree range applies to stable terms");
  int hi = -1 << 20, lo = 1 << 20;
  for (const auto& [e, c] : poly) {
    hi = std::max(hi, e[static_cast<std::size_t>(variable)]);
    lo = std::min(lo, e[static_cast<std::size_t>(variable)]);
  }
  return {hi, lo};
}

std::pair<MultiDiff, MultiDiff> base_cases() {
  MultiDiff w01;
  w01.g = 0;
  w01.k = 1;
  MultiDiff w02;
  w02.g = 0;
  w02.k = 2;
  return {w01, w02};
}

std::string to_json(const MultiDiff& w) {
  std::ostringstream os;
  os << "{\"g\":" << w.g << ",\"k\":" << w.k;
  if (w.g == 0 && w.k == 1) {
    os << ",\"closed_form\":\"-8 t (1 + t) / ((1 - t) (t^2 - 1)^2)\"}";
    return os.str();
  }
  if (w.g == 0 && w.k == 2) {
    os << ",\"closed_form\":\"1 / (t1 - t2)^2\"}";
    return os.str();
  }
  os << ",\"terms\":[";
  bool first = true;
  for (const auto& [e, c] : w.poly) {
    if (!first) os << ',';
    first = false;
    os << "{\"exponents\":[";
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << "],\"coeff\":\"" << c.get_str() << "\"}";
  }
  os << "]}";
  return os.str();
}

}  // namespace kpz::toprec
