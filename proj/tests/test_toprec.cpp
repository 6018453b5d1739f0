#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "kpzlab/error.hpp"
#include "kpzlab/random.hpp"
#include "kpzlab/rmt.hpp"
#include "kpzlab/toprec.hpp"

using namespace kpz;
using namespace kpz::toprec;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{0};
}

Recursion& shared() {
  static Recursion r;
  return r;
}

const std::vector<std::pair<int, int>> stable = {{0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}};

// Connected gluings of vertices with the given degrees, counted by genus.
// Half-edges around each vertex are cyclically ordered; faces are the cycles
// of successor o pairing.
std::map<int, long> map_count(const std::vector<int>& degrees) {
  int total = std::accumulate(degrees.begin(), degrees.end(), 0);
  std::map<int, long> out;
  if (total % 2) return out;
  std::vector<int> vertex, next;
  for (int v = 0, base = 0; v < static_cast<int>(degrees.size()); base += degrees[v], ++v)
    for (int i = 0; i < degrees[v]; ++i) {
      vertex.push_back(v);
      next.push_back(base + (i + 1) % degrees[v]);
    }
  std::vector<int> partner(static_cast<std::size_t>(total), -1);
  std::function<void()> rec = [&] {
    int first = -1;
    for (int i = 0; i < total; ++i)
      if (partner[i] < 0) {
        first = i;
        break;
      }
    if (first < 0) {
      std::vector<int> parent(degrees.size());
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
      for (int i = 0; i < total; ++i) parent[find(vertex[i])] = find(vertex[partner[i]]);
      for (std::size_t v = 0; v < degrees.size(); ++v)
        if (find(static_cast<int>(v)) != find(0)) return;
      std::vector<bool> seen(static_cast<std::size_t>(total), false);
      int faces = 0;
      for (int s = 0; s < total; ++s) {
        if (seen[s]) continue;
        ++faces;
        for (int c = s; !seen[c]; c = next[partner[c]]) seen[c] = true;
      }
      int euler = static_cast<int>(degrees.size()) - total / 2 + faces;
      ++out[(2 - euler) / 2];
      return;
    }
    for (int o = first + 1; o < total; ++o) {
      if (partner[o] >= 0) continue;
      partner[first] = o;
      partner[o] = first;
      rec();
      partner[first] = partner[o] = -1;
    }
  };
  rec();
  return out;
}

std::vector<Rational> random_tuple(Rng& rng, int k) {
  std::vector<Rational> t;
  for (int i = 0; i < k; ++i) {
    long num = static_cast<long>(uniform01(rng) * 40.0) - 20;
    long den = 1 + static_cast<long>(uniform01(rng) * 9.0);
    if (num == 0) num = 3;
    t.emplace_back(num, den);
    t.back().canonicalize();
  }
  return t;
}

}  // namespace

TEST_CASE("residues") {
  RationalFn inv_t(Polynomial::constant(1), Polynomial::monomial(1, 1));
  CHECK(residue(inv_t, Point::zero) == 1);
  CHECK(residue(inv_t, Point::infinity) == -1);
  RationalFn f(Polynomial::monomial(1, 1), Polynomial({-4, 0, 1}));
  CHECK(residue(f, Point::zero) == 0);
  CHECK(residue(f, Point::infinity) == -1);
  RationalFn deep(Polynomial::constant(1), Polynomial::monomial(1, 12));
  CHECK(code_of([&] { residue(deep, Point::zero, 8); }) == Errc::essential_singularity);
}

TEST_CASE("spectral curve chart") {
  auto c = chart();
  CHECK(c.curve_defect().is_zero());
  CHECK(c.z(Rational(3)) == Rational(5, 2));
  CHECK(c.y(Rational(3)) == Rational(-2));
  // dz/dt has a simple zero at t = 0 and dz = O(u) du at t = 1/u -> inf
  CHECK(c.dz.num().c.at(0) == 0);
  CHECK(c.dz.num().c.at(1) != 0);
  CHECK(c.dz.den().degree() - c.dz.num().degree() == 3);
  for (int i = -5; i <= 5; ++i)
    if (i != 0 && i != 2 && i != -2) CHECK(c.dz(Rational(i, 2)) != 0);
}

TEST_CASE("kernel") {
  Rational t1(2, 7), t(3, 5);
  Rational expected = Rational(-1, 64) * (1 / (t + t1) + 1 / (t - t1)) * (t * t - 1) * (t * t - 1) * (t * t - 1) / (t * t);
  CHECK(kernel(t1)(t) == expected);
}

TEST_CASE("W01: Catalan numbers and the semicircle transform") {
  auto [w01, w02] = base_cases();
  auto c = expansion_coeffs(w01, 20);
  std::vector<Rational> cat{1};
  for (int k = 0; k < 10; ++k) {
    Rational s = 0;
    for (int i = 0; i <= k; ++i) s += cat[i] * cat[k - i];
    cat.push_back(s);
  }
  for (int m = 0; m <= 20; ++m) CHECK(c[m] == (m % 2 ? Rational(0) : cat[m / 2]));
  CHECK(catalan(11) == cat);

  // z = 3 sits at t = -sqrt(5) on the sheet t -> -1; approach the real axis from above
  cplx t(-std::sqrt(5.0), 0.0);
  CHECK(chart().z(t).real() == doctest::Approx(3.0));
  cplx y = w01.evaluate(std::vector<cplx>{t}) / chart().dz(t);
  CHECK(std::abs(y - rmt::semicircle_stieltjes(cplx(3.0, 1e-15))) < 1e-12);
  for (cplx z : {cplx(3.0, 0.5), cplx(-1.0, 2.0), cplx(0.3, -0.7)}) {
    cplx tz = -std::sqrt((z + 2.0) / (z - 2.0));
    CHECK(std::abs(chart().z(tz) - z) < 1e-12);
    cplx yz = w01.evaluate(std::vector<cplx>{tz}) / chart().dz(tz);
    CHECK(std::abs(yz - rmt::semicircle_stieltjes(z)) < 1e-12);
  }

  Rng rng = make_rng(1);
  for (int i = 0; i < 10; ++i) {
    auto tt = random_tuple(rng, 2);
    if (tt[0] == tt[1]) continue;
    CHECK(w02.evaluate(tt) == w02.evaluate({tt[1], tt[0]}));
  }
  CHECK(code_of([&] { expansion_coeffs(w02, 0, 4); }) != Errc{0});
}

TEST_CASE("recursion preconditions") {
  Recursion fresh;
  CHECK(code_of([&] { recursion_step(0, 1, fresh); }) == Errc::invalid_argument);
  CHECK(code_of([&] { recursion_step(0, 2, fresh); }) == Errc::invalid_argument);
  CHECK(code_of([&] { recursion_step(1, 2, fresh); }) == Errc::cache_miss);
  CHECK_NOTHROW(recursion_step(1, 1, fresh));
  CHECK(code_of([&] { fresh.get(3, 1); }) == Errc::out_of_range);
  CHECK(code_of([&] { fresh.get(0, 4); }) == Errc::out_of_range);
}

TEST_CASE("every stable W is symmetric (exact, 20 random rational tuples)") {
  Rng rng = make_rng(2024);
  for (auto [g, k] : stable) {
    const auto& w = shared().get(g, k);
    CHECK(!w.poly.empty());
    for (int trial = 0; trial < 20; ++trial) {
      auto t = random_tuple(rng, k);
      Rational v = w.evaluate(t);
      std::vector<int> perm(static_cast<std::size_t>(k));
      std::iota(perm.begin(), perm.end(), 0);
      while (std::next_permutation(perm.begin(), perm.end())) {
        std::vector<Rational> u;
        for (int i : perm) u.push_back(t[i]);
        CHECK(w.evaluate(u) == v);
      }
    }
  }
}

TEST_CASE("stable W are Laurent polynomials: poles only at 0 and infinity") {
  for (auto [g, k] : stable) {
    const auto& w = shared().get(g, k);
    for (int i = 0; i < k; ++i) {
      auto [hi, lo] = w.degree_range(i);
      CHECK(hi >= lo);
      CHECK(lo < 0);
    }
    // finite on the anti-diagonal and on the collision locus
    if (k >= 2) {
      std::vector<Rational> t(static_cast<std::size_t>(k), Rational(1, 3));
      t[1] = Rational(-1, 3);
      CHECK_NOTHROW(w.evaluate(t));
      t[1] = Rational(1, 3);
      CHECK_NOTHROW(w.evaluate(t));
    }
    std::vector<cplx> z;
    std::vector<Rational> q;
    for (int i = 0; i < k; ++i) {
      q.emplace_back(2 + i, 5);
      z.emplace_back((2.0 + i) / 5.0, 0.0);
    }
    double exact = w.evaluate(q).get_d();
    CHECK(std::abs(w.evaluate(z) - exact) < 1e-10 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("expansion coefficients") {
  const auto& w11 = shared().get(1, 1);
  auto c11 = expansion_coeffs(w11, 8);
  CHECK(c11[4] == 1);
  CHECK(c11[6] == 10);
  CHECK(c11[8] == 70);
  for (int g = 0; g <= 2; ++g) {
    auto c = expansion_coeffs(shared().get(g, 1), 20);
    for (int m = 1; m <= 20; m += 2) CHECK(c[m] == 0);
  }
  CHECK(code_of([&] { expansion_coeffs(w11, 21); }) == Errc::out_of_range);
  // y ~ -z on the sheet t -> 1, so W01 is singular at z = inf there
  auto [w01, w02] = base_cases();
  CHECK(code_of([&] { expansion_coeffs(w01, 4, Sheet::reflected); }) == Errc::chart_singularity);
  CHECK_NOTHROW(expansion_coeffs(w11, 4, Sheet::reflected));
}

TEST_CASE("expansions count connected maps by genus") {
  const int orders[] = {0, 10, 6, 4};
  for (auto [g, k] : stable) {
    auto all = expansion_all(shared().get(g, k), orders[k]);
    for (const auto& [m, c] : all) {
      auto counts = map_count(m);
      long expected = counts.count(g) ? counts[g] : 0;
      INFO("g=" << g << " k=" << k << " m0=" << m[0]);
      CHECK(c == expected);
    }
  }
}

TEST_CASE("genus expansion reproduces exact trace moments") {
  std::vector<std::vector<Rational>> c;
  for (int g = 0; g <= 2; ++g) c.push_back(expansion_coeffs(shared().get(g, 1), 8));
  for (int n = 1; n <= 6; ++n)
    for (int j = 0; j <= 4; ++j) {
      Rational sum = 0;
      for (int g = 0; g <= 2; ++g) {
        Rational w = c[g][2 * j];
        for (int e = 0; e < j + 1 - 2 * g; ++e) w *= n;
        for (int e = 0; e > j + 1 - 2 * g; --e) w /= n;
        sum += w;
      }
      CHECK(sum == Rational(static_cast<long>(rmt::exact_trace_moment(n, 2 * j))));
    }
}

TEST_CASE("residue sum over all poles vanishes") {
  Recursion checked(true);
  checked.get(1, 2);
  checked.get(2, 1);
  for (const auto& s : checked.stats()) CHECK(s.max_residue_check < 1e-10);
  CHECK(checked.stats().size() >= 4);
}

TEST_CASE("json export") {
  std::string j = to_json(shared().get(1, 1));
  CHECK(j.find("\"g\":1") != std::string::npos);
  CHECK(j.find("\"terms\"") != std::string::npos);
}
