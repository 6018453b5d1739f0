#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/bessel.hpp>

#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"
#include "kpzlab/random.hpp"

using namespace kpz;
using namespace kpz::exact;
using asep::Rates;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{0};
}

double skellam_pmf(long k, double p, double q, double t) {
  if (p == 0.0) {
    if (k < 0) return 0.0;
    return std::exp(-q * t + static_cast<double>(k) * std::log(q * t) - std::lgamma(static_cast<double>(k) + 1.0));
  }
  double mu1 = q * t, mu2 = p * t;
  return std::exp(-(mu1 + mu2)) * std::pow(mu1 / mu2, 0.5 * static_cast<double>(k)) *
         boost::math::cyl_bessel_i(static_cast<double>(std::abs(k)), 2.0 * std::sqrt(mu1 * mu2));
}

std::vector<cplx> spectrum(const GeneratorMatrix& g) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(g.dense());
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

// Largest distance from an element of a to its greedily matched partner in b.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx u, cplx v) { return std::abs(u - x) < std::abs(v - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

State reflect(const State& x) {
  State r;
  for (auto it = x.rbegin(); it != x.rend(); ++it) r.push_back(-1 - *it);
  return r;
}

}  // namespace

TEST_CASE("generator: N = 1, L = 3 circulant") {
  const double p = 0.3;
  auto g = generator(1, 3, Rates::from_left(p));
  Eigen::MatrixXd a = g.dense();
  REQUIRE(g.size() == 3);
  for (int x = 0; x < 3; ++x) {
    CHECK(a(x, x) == doctest::Approx(-1.0));
    CHECK(a(x, (x + 2) % 3) == doctest::Approx(p));
    CHECK(a(x, (x + 1) % 3) == doctest::Approx(1.0 - p));
  }
}

TEST_CASE("generator: particle-hole symmetry of the spectrum") {
  for (long L : {5L, 7L}) {
    Rates r = Rates::from_left(0.2);
    auto particles = generator(static_cast<int>(L - 1), L, r);
    auto hole = generator(1, L, r.mirrored());
    CHECK(multiset_distance(spectrum(particles), spectrum(hole)) < 1e-10);
  }
}

TEST_CASE("generator: uniform measure is stationary, off-diagonals in {p, q}") {
  for (auto [n, L] : {std::pair{2, 6L}, {3, 7L}, {4, 9L}}) {
    Rates r = Rates::from_left(0.37);
    auto g = generator(n, L, r);
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), 1.0 / g.size());
    Eigen::VectorXd flow = g.A.transpose() * pi;
    CHECK(flow.cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXd a = g.dense();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (i != j && a(i, j) != 0.0) CHECK((a(i, j) == r.p || a(i, j) == r.q));
    CHECK((a.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK(code_of([] { generator(3, 15, Rates()); }) == Errc::state_space_too_large);
  CHECK(code_of([] { generator(4, 4, Rates()); }) == Errc::invalid_argument);
}

TEST_CASE("master_evolve") {
  Rates r = Rates::from_left(0.3);
  auto g = generator(2, 6, r);
  Eigen::VectorXd pi0 = delta_distribution(g, {0, 1});
  CHECK(master_evolve(g, pi0, 0.0) == pi0);

  Eigen::VectorXd late = master_evolve(g, pi0, 200.0);
  CHECK((late.array() - 1.0 / g.size()).abs().maxCoeff() < 1e-8);
  CHECK(std::abs(late.sum() - 1.0) < 1e-10);

  // one walker on a ring: Skellam wrapped mod L
  const long L = 7;
  const double t = 1.7;
  auto g1 = generator(1, L, r);
  Eigen::VectorXd law = master_evolve(g1, delta_distribution(g1, {2}), t);
  for (long x = 0; x < L; ++x) {
    double wrapped = 0.0;
    for (long m = -12; m <= 12; ++m) wrapped += skellam_pmf(x - 2 + m * L, r.p, r.q, t);
    CHECK(std::abs(law[static_cast<Eigen::Index>(g1.find({x}))] - wrapped) < 1e-10);
  }
}

TEST_CASE("amplitude") {
  Rng rng = make_rng(4);
  auto rnd = [&] { return cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5); };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> xi{rnd(), rnd(), rnd()};
    CHECK(std::abs(amplitude({0, 1, 2}, xi, Rates::from_left(0.3)) - 1.0) < 1e-15);
    std::vector<cplx> two{xi[0], xi[1]};
    cplx expected = -(two[0] * two[1] - two[1]) / (two[0] * two[1] - two[0]);
    CHECK(std::abs(amplitude({1, 0}, two, Rates::tasep()) - expected) < 1e-12 * std::abs(expected));
  }
  // p + q x1 x2 - x1 = 0 at x1 = 1, x2 = 1 with any rates
  CHECK(code_of([] { amplitude({1, 0}, {cplx(1.0, 0.0), cplx(1.0, 0.0)}, Rates::from_left(0.4)); }) ==
        Errc::pole_proximity);
}

TEST_CASE("transition probability: one particle") {
  Rates r = Rates::from_left(0.3);
  CHECK(std::abs(transition_probability({3}, {3}, 0.0, r).value - 1.0) < 1e-9);
  CHECK(std::abs(transition_probability({3}, {5}, 0.0, r).value) < 1e-9);
  for (double t : {0.4, 1.5, 3.0})
    for (long d = -6; d <= 6; ++d) {
      auto res = transition_probability({0}, {d}, t, r);
      CHECK(std::abs(res.value - skellam_pmf(d, r.p, r.q, t)) < 1e-9);
      CHECK(std::abs(res.imag) < 1e-9);
    }
  for (long d = 0; d <= 5; ++d)
    CHECK(std::abs(transition_probability({1}, {1 + d}, 2.0, Rates::tasep()).value - skellam_pmf(d, 0.0, 1.0, 2.0)) <
          1e-9);
}

TEST_CASE("transition probability: N = 2 vs width-40 window oracle") {
  Rates r = Rates::from_left(0.3);
  const double t = 0.7;
  State y{0, 1};
  auto g = window_generator(2, -20, 20, r);
  Eigen::VectorXd law = master_evolve(g, delta_distribution(g, y), t);

  // displacements beyond 8 carry mass below 1e-7 at this t
  double total = 0.0, worst = 0.0, worst_imag = 0.0;
  for (long a = -8; a <= 8; ++a)
    for (long b = std::max(a + 1, -7L); b <= 9; ++b) {
      auto res = transition_probability(y, {a, b}, t, r);
      CHECK(res.value >= -1e-9);
      CHECK(res.value <= 1.0 + 1e-9);
      total += res.value;
      worst = std::max(worst, std::abs(res.value - law[static_cast<Eigen::Index>(g.find({a, b}))]));
      worst_imag = std::max(worst_imag, std::abs(res.imag));
      CHECK(res.doubling_change < 1e-9);
    }
  CHECK(worst < 1e-8);
  CHECK(worst_imag < 1e-9);
  CHECK(std::abs(total - 1.0) < 1e-6);
}

TEST_CASE("transition probability vs uniformization on random cases") {
  Rng rng = make_rng(31);
  auto pick = [&](long lo, long hi) { return lo + static_cast<long>(uniform01(rng) * static_cast<double>(hi - lo + 1)); };
  int n_cases[] = {0, 6, 4, 1};
  for (int n = 1; n <= 3; ++n)
    for (int c = 0; c < n_cases[n]; ++c) {
      double p = std::vector<double>{0.0, 0.25, 0.5}[static_cast<std::size_t>(c % 3)];
      double t = 0.2 + 1.8 * uniform01(rng);
      State y, x;
      long pos = 0, posx = 0;
      for (int i = 0; i < n; ++i) {
        pos += pick(1, 3);
        y.push_back(pos);
      }
      for (int i = 0; i < n; ++i) {
        posx = std::max(posx + 1, y[static_cast<std::size_t>(i)] + pick(-2, 3));
        x.push_back(posx);
      }
      Rates r = Rates::from_left(p);
      double oracle = uniformization_probability(y, x, t, r, -14, 24);
      auto res = transition_probability(y, x, t, r);
      CHECK(std::abs(res.value - oracle) < 1e-8);
    }
}

TEST_CASE("transition probability: reflection identities") {
  Rates r = Rates::from_left(0.2);
  State y{-1, 2}, x{0, 3};
  double t = 1.1;
  double base = transition_probability(y, x, t, r).value;
  CHECK(std::abs(base - transition_probability(reflect(y), reflect(x), t, r.mirrored()).value) < 1e-9);
  CHECK(std::abs(base - transition_probability(reflect(x), reflect(y), t, r).value) < 1e-9);

  Rates ssep(0.5, 0.5);
  CHECK(std::abs(transition_probability(y, x, t, ssep).value -
                 transition_probability(reflect(y), reflect(x), t, ssep).value) < 1e-9);
}

TEST_CASE("bethe_residual") {
  Rates sym(0.5, 0.5);
  for (long L : {4L, 6L, 9L})
    for (long k = 0; k < L; ++k) {
      cplx w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L));
      CHECK(bethe_residual({w}, L, sym) < 1e-12);
      if (k != 0) CHECK(bethe_residual({cplx(1.0, 0.0), w}, L, sym) < 1e-12);
    }
  CHECK(bethe_residual({cplx(0.3, 0.8), cplx(-0.5, 0.2)}, 6, Rates::from_left(0.3)) > 1e-3);
}

TEST_CASE("bethe_solve: one particle gives roots of unity") {
  for (double p : {0.1, 0.5, 0.8})
    for (int k = 0; k < 5; ++k) {
      auto roots = bethe_solve(1, 5, Rates::from_left(p), {k});
      REQUIRE(roots.z.size() == 1);
      CHECK(std::abs(std::pow(roots.z[0], 5) - 1.0) < 1e-10);
      CHECK(roots.residual < 1e-10);
    }
}

TEST_CASE("bethe_solve: N = 2, L = 4, p = 0.4 energies lie in the generator spectrum") {
  Rates r = Rates::from_left(0.4);
  auto spec = spectrum(generator(2, 4, r));
  int solved = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      BetheRoots roots;
      try {
        roots = bethe_solve(2, 4, r, {a, b});
      } catch (const Error&) {
        continue;
      }
      ++solved;
      CHECK(roots.residual < 1e-10);
      double best = INFINITY;
      for (cplx e : spec) best = std::min(best, std::abs(e - roots.energy));
      CHECK(best < 1e-9);

      auto again = bethe_refine(roots.z, 4, r);
      for (std::size_t j = 0; j < roots.z.size(); ++j) CHECK(std::abs(again.z[j] - roots.z[j]) < 1e-10);

      auto pair = bethe_eigenpair(roots);
      CHECK(pair.generator_residual < 1e-8);
      CHECK(pair.periodic_residual < 1e-8);
    }
  CHECK(solved >= 4);
}

TEST_CASE("bethe_eigenpair: N = 1 plane waves and scaling invariance") {
  Rates r = Rates::from_left(0.3);
  auto g = generator(1, 6, r);
  Eigen::MatrixXcd a = g.dense().cast<cplx>();
  for (int k = 0; k < 6; ++k) {
    auto roots = bethe_solve(1, 6, r, {k});
    auto pair = bethe_eigenpair(roots);
    cplx z = roots.z[0];
    CHECK(std::abs(pair.energy - (r.p / z + r.q * z - 1.0)) < 1e-12);
    CHECK(pair.generator_residual < 1e-8);
    for (long x = 0; x < 6; ++x) {
      cplx ratio = pair.vector[static_cast<Eigen::Index>(g.find({x}))] / pair.vector[0];
      CHECK(std::abs(ratio - std::pow(z, static_cast<double>(x))) < 1e-10);
    }
    for (cplx c : {cplx(3.0, 0.0), cplx(-1e-3, 2e-3), cplx(0.0, 1e5)}) {
      Eigen::VectorXcd v = c * pair.vector;
      double res = (a * v - pair.energy * v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff();
      CHECK(res < 1e-8);
      CHECK(std::abs(res - pair.generator_residual) < 1e-14);
    }
  }
}

TEST_CASE("bethe_spectrum reports coverage") {
  auto s = bethe_spectrum(2, 5, Rates::from_left(0.45));
  CHECK(s.coverage > 0.0);
  CHECK(s.coverage <= 1.0);
  CHECK(s.max_eigenvalue_mismatch < 1e-9);
}
