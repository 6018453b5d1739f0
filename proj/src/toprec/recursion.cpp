#include <algorithm>
#include <cmath>
#include <numbers>

#include "kpzlab/error.hpp"
#include "kpzlab/random.hpp"
#include "kpzlab/toprec.hpp"

namespace kpz::toprec {

namespace {

// Integrand variables: index 0 is the integration variable t, index i >= 1 is
// t_i of the target (t_1 is the kernel argument).
struct Arg {
  int sign = 0;   // +1 / -1 for t or -t; 0 for an outer variable
  int outer = 0;  // index >= 1 when sign == 0
};

struct Factor {
  const MultiDiff* w = nullptr;
  std::vector<Arg> args;
};

using Term = std::vector<Factor>;

int pow_sign(int s, int e) { return (s < 0 && (e % 2 != 0)) ? -1 : 1; }

void add_to(Laurent& acc, const std::vector<int>& e, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = acc.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

Laurent multiply(const Laurent& a, const Laurent& b, int cap) {
  Laurent r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      if (ea[0] + eb[0] > cap) continue;
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add_to(r, e, ca * cb);
    }
  }
  return r;
}

// Lowest power of the local parameter (t at 0, u = 1/t at infinity).
int min_order(const Factor& f, Point a) {
  const bool zero = a == Point::zero;
  if (f.w->is_base()) {
    const bool diagonal = f.args[0].sign != 0 && f.args[1].sign != 0;
    if (diagonal) return zero ? -2 : 2;
    return zero ? 0 : 2;
  }
  int best = 1 << 20;
  for (const auto& [e, c] : f.w->poly) {
    int d = 0;
    for (std::size_t i = 0; i < f.args.size(); ++i)
      if (f.args[i].sign != 0) d += e[i];
    best = std::min(best, zero ? d : -d);
  }
  return best;
}

Laurent expand(const Factor& f, Point a, int cap, int dims) {
  const bool zero = a == Point::zero;
  Laurent r;
  if (f.w->is_base()) {
    const Arg& a0 = f.args[0];
    const Arg& a1 = f.args[1];
    if (a0.sign != 0 && a1.sign != 0) {
      // dt d(-t) / (2t)^2
      std::vector<int> e(static_cast<std::size_t>(dims), 0);
      e[0] = zero ? -2 : 2;
      if (e[0] <= cap) add_to(r, e, Rational(-1, 4));
      return r;
    }
    const int s = a0.sign != 0 ? a0.sign : a1.sign;
    const int j = a0.sign != 0 ? a1.outer : a0.outer;
    for (int m = 0;; ++m) {
      std::vector<int> e(static_cast<std::size_t>(dims), 0);
      e[0] = zero ? m : m + 2;
      if (e[0] > cap) break;
      e[static_cast<std::size_t>(j)] = zero ? -m - 2 : m;
      add_to(r, e, Rational(m + 1) * pow_sign(s, m) * s);
    }
    return r;
  }
  for (const auto& [ew, c] : f.w->poly) {
    std::vector<int> e(static_cast<std::size_t>(dims), 0);
    Rational coeff = c;
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      const Arg& arg = f.args[i];
      if (arg.sign != 0) {
        e[0] += ew[i];
        coeff *= pow_sign(arg.sign, ew[i]) * arg.sign;
      } else {
        e[static_cast<std::size_t>(arg.outer)] += ew[i];
      }
    }
    if (!zero) e[0] = -e[0];
    if (e[0] <= cap) add_to(r, e, coeff);
  }
  return r;
}

// 2 t / (t^2 - t1^2) and -(1/64)(t^2 - 1)^3 / t^2.
Laurent kernel_fraction(Point a, int cap, int dims) {
  Laurent r;
  for (int m = 0; 2 * m + 1 <= cap; ++m) {
    std::vector<int> e(static_cast<std::size_t>(dims), 0);
    e[0] = 2 * m + 1;
    e[1] = a == Point::zero ? -2 * m - 2 : 2 * m;
    add_to(r, e, a == Point::zero ? -2 : 2);
  }
  return r;
}

Laurent kernel_prefactor(Point a, int dims) {
  Laurent r;
  const int sgn = a == Point::zero ? 1 : -1;
  const std::pair<int, int> terms[] = {{4, 1}, {2, -3}, {0, 3}, {-2, -1}};
  for (auto [p, c] : terms) {
    std::vector<int> e(static_cast<std::size_t>(dims), 0);
    e[0] = sgn * p;
    add_to(r, e, Rational(-c, 64));
  }
  return r;
}

// Residue at a of the kernel times one bracket term, as a Laurent polynomial
// in t_1..t_k.
Laurent term_residue(const Term& term, Point a, int dims) {
  const int target = a == Point::zero ? -1 : 1;
  const int frac_min = 1;
  const int pre_min = a == Point::zero ? -2 : -4;
  std::vector<int> mins;
  int total = frac_min + pre_min;
  for (const auto& f : term) {
    mins.push_back(min_order(f, a));
    total += mins.back();
  }
  if (total > target) return {};
  // Multiply prefactor, then each factor, then the fraction last.
  int rest = total - pre_min;
  Laurent acc = kernel_prefactor(a, dims);
  int have = pre_min;
  for (std::size_t i = 0; i < term.size(); ++i) {
    rest -= mins[i];
    const int cap_factor = target - (have + rest);
    Laurent f = expand(term[i], a, cap_factor, dims);
    acc = multiply(acc, f, target - rest);
    have += mins[i];
  }
  acc = multiply(acc, kernel_fraction(a, target - have, dims), target);
  Laurent out;
  for (const auto& [e, c] : acc) {
    if (e[0] != target) continue;
    std::vector<int> rest_e(e.begin() + 1, e.end());
    add_to(out, rest_e, a == Point::zero ? c : Rational(-c));
  }
  return out;
}

cplx eval_laurent(const Laurent& p, const std::vector<cplx>& t) {
  cplx acc = 0.0;
  for (const auto& [e, c] : p) {
    cplx term = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) term *= std::pow(t[i], e[i]);
    acc += term;
  }
  return acc;
}

cplx eval_integrand(const std::vector<Term>& terms, cplx t, const std::vector<cplx>& outer) {
  const cplx t1 = outer[0];
  const cplx kern = -1.0 / 64.0 * (1.0 / (t + t1) + 1.0 / (t - t1)) * std::pow(t * t - 1.0, 3) / (t * t);
  cplx bracket = 0.0;
  for (const auto& term : terms) {
    cplx prod = 1.0;
    for (const auto& f : term) {
      std::vector<cplx> vals;
      double sign = 1.0;
      for (const auto& arg : f.args) {
        if (arg.sign != 0) {
          vals.push_back(static_cast<double>(arg.sign) * t);
          sign *= arg.sign;
        } else {
          vals.push_back(outer[static_cast<std::size_t>(arg.outer - 1)]);
        }
      }
      prod *= sign * f.w->evaluate(vals);
    }
    bracket += prod;
  }
  return kern * bracket;
}

// (1 / 2 pi i) * contour integral over |t| = r; also returns the bound r max|f|.
std::pair<cplx, double> circle_integral(const std::vector<Term>& terms, double r, const std::vector<cplx>& outer) {
  const int m = 512;
  cplx acc = 0.0;
  double bound = 0.0;
  for (int i = 0; i < m; ++i) {
    const cplx t = std::polar(r, 2.0 * std::numbers::pi * i / m);
    const cplx f = eval_integrand(terms, t, outer);
    acc += f * t;
    bound = std::max(bound, std::abs(f) * r);
  }
  return {acc / static_cast<double>(m), bound};
}

}  // namespace

Recursion::Recursion(bool check_residues) : check_residues_(check_residues) {
  auto [w01, w02] = base_cases();
  cache_[{0, 1}] = w01;
  cache_[{0, 2}] = w02;
}

const MultiDiff& Recursion::get(int g, int k) {
  require(g >= 0 && k >= 1 && 2 * g - 2 + k >= -1, Errc::invalid_argument, "invalid (g, k)");
  require(g <= 2 && k <= 3, Errc::out_of_range, "requested W_{g,k} limited to g <= 2, k <= 3");
  return ensure(g, k);
}

const MultiDiff& Recursion::ensure(int g, int k) {
  auto it = cache_.find({g, k});
  if (it != cache_.end()) return it->second;
  require(2 * g - 2 + k > 0, Errc::invalid_argument, "invalid (g, k)");
  if (g >= 1) ensure(g - 1, k + 1);
  for (int g1 = 0; g1 <= g; ++g1) {
    for (int s = 0; s <= k - 1; ++s) {
      const int k1 = s + 1, g2 = g - g1, k2 = k - 1 - s + 1;
      if ((g1 == 0 && k1 == 1) || (g2 == 0 && k2 == 1)) continue;
      ensure(g1, k1);
      ensure(g2, k2);
    }
  }
  MultiDiff w = recursion_step(g, k, *this);
  return cache_.emplace(std::make_pair(g, k), std::move(w)).first->second;
}

MultiDiff recursion_step(int g, int k, Recursion& cache) {
  require(g >= 0 && k >= 1, Errc::invalid_argument, "invalid (g, k)");
  require(2 * g - 2 + k > 0, Errc::invalid_argument, "base cases are not produced by the recursion");
  auto dep = [&](int gg, int kk) -> const MultiDiff* {
    auto it = cache.cache_.find({gg, kk});
    require(it != cache.cache_.end(), Errc::cache_miss,
            "missing W_{" + std::to_string(gg) + "," + std::to_string(kk) + "}");
    return &it->second;
  };

  std::vector<Term> terms;
  if (g >= 1) {
    Factor f{dep(g - 1, k + 1), {Arg{1, 0}, Arg{-1, 0}}};
    for (int j = 2; j <= k; ++j) f.args.push_back(Arg{0, j});
    terms.push_back({f});
  }
  const int rest = k - 1;  // outer variables 2..k
  for (int g1 = 0; g1 <= g; ++g1) {
    for (unsigned mask = 0; mask < (1u << rest); ++mask) {
      const int n1 = __builtin_popcount(mask);
      const int k1 = n1 + 1, g2 = g - g1, k2 = rest - n1 + 1;
      if ((g1 == 0 && k1 == 1) || (g2 == 0 && k2 == 1)) continue;
      Factor a{dep(g1, k1), {Arg{1, 0}}};
      Factor b{dep(g2, k2), {Arg{-1, 0}}};
      for (int j = 0; j < rest; ++j) {
        if (mask & (1u << j)) a.args.push_back(Arg{0, j + 2});
        else b.args.push_back(Arg{0, j + 2});
      }
      terms.push_back({a, b});
    }
  }

  const int dims = k + 1;
  Laurent res0, resinf;
  for (const auto& term : terms) {
    for (const auto& [e, c] : term_residue(term, Point::zero, dims)) add_to(res0, e, c);
    for (const auto& [e, c] : term_residue(term, Point::infinity, dims)) add_to(resinf, e, c);
  }

  MultiDiff w;
  w.g = g;
  w.k = k;
  w.poly = res0;
  for (const auto& [e, c] : resinf) add_to(w.poly, e, c);

  RecursionStats st;
  st.g = g;
  st.k = k;
  st.integrand_terms = terms.size();
  if (cache.check_residues_) {
    auto rng = make_rng(0x7e5a1d0eULL + static_cast<std::uint64_t>(16 * g + k));
    std::vector<cplx> outer;
    for (int j = 0; j < k; ++j)
      outer.push_back(std::polar(0.85 + 0.3 * uniform01(rng), 2.0 * std::numbers::pi * uniform01(rng)));
    auto [small, bound_s] = circle_integral(terms, 0.4, outer);
    auto [big, bound_b] = circle_integral(terms, 2.5, outer);
    const double d0 = std::abs(small - eval_laurent(res0, outer)) / std::max(1.0, bound_s);
    const double d1 = std::abs(big + eval_laurent(resinf, outer)) / std::max(1.0, bound_b);
    st.max_residue_check = std::max(d0, d1);
  }
  cache.stats_.push_back(st);
  return w;
}

}  // namespace kpz::toprec
