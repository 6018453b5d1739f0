#include <algorithm>
#include <cmath>
#include <numeric>

#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"

namespace kpz::exact {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  return out;
}

// S(a, b) for the inversion (a, b) = (sigma(i), sigma(j)).
cplx s_factor(cplx xa, cplx xb, double p, double q) {
  cplx prod = q * xa * xb;
  return -(p + prod - xa) / (p + prod - xb);
}

struct Quadrature {
  double value = 0.0;
  double imag = 0.0;
};

// Tensor trapezoid rule on |xi| = r with M nodes per variable. The contour
// formula runs with (pf, qf) = (right rate, left rate).
Quadrature integrate(const State& y, const State& x, double t, double pf, double qf, double r, int m) {
  const int n = static_cast<int>(y.size());
  const auto perms = permutations(n);
  std::vector<cplx> nodes(static_cast<std::size_t>(m));
  std::vector<cplx> weight(static_cast<std::size_t>(m));  // xi e^{eps(xi) t} / M
  for (int k = 0; k < m; ++k) {
    cplx xi = std::polar(r, 2.0 * kPi * k / m);
    nodes[k] = xi;
    weight[k] = xi * std::exp((pf / xi + qf * xi - 1.0) * t) / static_cast<double>(m);
  }
  // power[v][k][j] = xi_k^{x_j - y_v - 1}
  std::vector<cplx> power(static_cast<std::size_t>(n * m * n));
  auto pw = [&](int v, int k, int j) -> cplx& { return power[static_cast<std::size_t>((v * m + k) * n + j)]; };
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j) pw(v, k, j) = std::pow(nodes[k], static_cast<int>(x[j] - y[v] - 1));

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<cplx> xi(static_cast<std::size_t>(n));
  cplx total = 0.0;
  const long count = static_cast<long>(std::pow(m, n));
  cplx outer = 0.0;
  for (long flat = 0; flat < count; ++flat) {
    long rem = flat;
    for (int v = n - 1; v >= 0; --v) {
      idx[v] = static_cast<int>(rem % m);
      rem /= m;
      xi[v] = nodes[idx[v]];
    }
    cplx base = 1.0;
    for (int v = 0; v < n; ++v) base *= weight[idx[v]];
    cplx s[3][3];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) s[a][b] = s_factor(xi[a], xi[b], pf, qf);
    cplx sum = 0.0;
    for (const auto& sigma : perms) {
      cplx amp = 1.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (sigma[i] > sigma[j]) amp *= s[sigma[i]][sigma[j]];
      for (int j = 0; j < n; ++j) amp *= pw(sigma[j], idx[sigma[j]], j);
      sum += amp;
    }
    outer += base * sum;
    // flush partial sums along the slowest axis for a fixed summation tree
    if ((flat + 1) % m == 0) {
      total += outer;
      outer = 0.0;
    }
  }
  total += outer;
  return {total.real(), total.imag()};
}

}  // namespace

cplx amplitude(const std::vector<int>& sigma, const std::vector<cplx>& xi, const Rates& rates) {
  require(sigma.size() == xi.size(), Errc::invalid_argument, "permutation and variables differ in length");
  const std::size_t n = sigma.size();
  cplx amp = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sigma[i] <= sigma[j]) continue;
      cplx a = xi[static_cast<std::size_t>(sigma[i])];
      cplx b = xi[static_cast<std::size_t>(sigma[j])];
      cplx prod = rates.q * a * b;
      cplx den = rates.p + prod - b;
      require(std::abs(den) > 1e-10, Errc::pole_proximity, "amplitude denominator vanishes");
      amp *= -(rates.p + prod - a) / den;
    }
  }
  return amp;
}

ContourResult transition_probability(const State& y, const State& x, double t, const Rates& rates,
                                     const ContourSpec& contour) {
  const std::size_t n = y.size();
  require(n >= 1 && n <= 3 && x.size() == n, Errc::invalid_argument, "contour formula supports 1 <= N <= 3");
  for (std::size_t i = 1; i < n; ++i)
    require(y[i - 1] < y[i] && x[i - 1] < x[i], Errc::invalid_ordering, "y and x must be strictly increasing");
  require(t >= 0.0 && std::isfinite(t), Errc::invalid_argument, "t must be finite and nonnegative");
  require(contour.nodes >= 32 && contour.nodes % 2 == 0, Errc::invalid_argument, "need an even M >= 32");
  require(contour.radius > 0.0 && contour.radius < 1.0, Errc::invalid_argument, "radius must lie in (0,1)");

  const double pf = rates.q;
  const double qf = rates.p;
  // |pf + qf a b - b| >= pf - r (1 + qf r) on the closed disc
  double r = contour.radius;
  int shrink = 0;
  if (n > 1) {
    while (pf - r * (1.0 + qf * r) <= 1e-10) {
      require(shrink < contour.max_shrink, Errc::pole_proximity, "no admissible contour radius");
      r *= 0.5;
      ++shrink;
    }
  }
  Quadrature base = integrate(y, x, t, pf, qf, r, contour.nodes);
  Quadrature doubled = integrate(y, x, t, pf, qf, r, 2 * contour.nodes);
  ContourResult res;
  res.value = doubled.value;
  res.imag = doubled.imag;
  res.radius = r;
  res.nodes = 2 * contour.nodes;
  res.doubling_change = std::abs(doubled.value - base.value);
  require(res.doubling_change <= 1e-8, Errc::no_convergence, "quadrature not converged when doubling M");
  return res;
}

double uniformization_probability(const State& y, const State& x, double t, const Rates& rates, long lo, long hi) {
  GeneratorMatrix g = window_generator(static_cast<int>(y.size()), lo, hi, rates);
  Eigen::VectorXd law = master_evolve(g, delta_distribution(g, y), t);
  return law[static_cast<Eigen::Index>(g.find(x))];
}

}  // namespace kpz::exact
