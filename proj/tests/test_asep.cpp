#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "kpzlab/asep.hpp"
#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"
#include "kpzlab/random.hpp"

using namespace kpz;
using namespace kpz::asep;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{0};
}

// Skellam(q t, p t) pmf through the modified Bessel function.
double skellam_pmf(long k, double p, double q, double t) {
  if (p == 0.0) {
    if (k < 0) return 0.0;
    return std::exp(-q * t + k * std::log(q * t) - std::lgamma(static_cast<double>(k) + 1.0));
  }
  double mu1 = q * t, mu2 = p * t;
  return std::exp(-(mu1 + mu2)) * std::pow(mu1 / mu2, 0.5 * static_cast<double>(k)) *
         boost::math::cyl_bessel_i(static_cast<double>(std::abs(k)), 2.0 * std::sqrt(mu1 * mu2));
}

}  // namespace

TEST_CASE("build_initial examples") {
  auto ring = build_initial(Ring{4}, Explicit{{0, 2}});
  CHECK(ring.sites == std::vector<long>{0, 2});

  auto step = build_initial(InfiniteWindow{-10, 10}, Step{});
  std::vector<long> expected;
  for (long k = -10; k <= -1; ++k) expected.push_back(k);
  CHECK(step.sites == expected);

  CHECK(code_of([] { build_initial(Ring{100}, Bernoulli{1.0, 7}); }) == Errc::invalid_argument);
  CHECK(code_of([] { build_initial(Ring{10}, Explicit{{3, 1}}); }) == Errc::invalid_ordering);
  CHECK(code_of([] { build_initial(Ring{10}, Explicit{{2, 2}}); }) == Errc::invalid_ordering);
  CHECK(code_of([] { build_initial(InfiniteWindow{1, 10}, Step{}); }) == Errc::window_too_small);
  CHECK(code_of([] { build_initial(InfiniteWindow{0, 4}, Explicit{{5}}); }) == Errc::window_escape);
}

TEST_CASE("rates") {
  CHECK(code_of([] { Rates(0.3, 0.6); }) == Errc::invalid_argument);
  CHECK(code_of([] { Rates(-0.1, 1.1); }) == Errc::invalid_argument);
  Rates r = Rates::from_left(0.3);
  CHECK(r.mirrored().p == doctest::Approx(0.7));
}

TEST_CASE("occupation examples") {
  auto ring = build_initial(Ring{4}, Explicit{{0, 2}});
  CHECK(occupation(ring).eta == std::vector<std::uint8_t>{1, 0, 1, 0});

  auto empty = build_initial(InfiniteWindow{-5, 5}, Explicit{{}});
  auto occ = occupation(empty);
  CHECK(occ.particles() == 0);
  CHECK(std::all_of(occ.eta.begin(), occ.eta.end(), [](auto v) { return v == 0; }));

  auto step = build_initial(InfiniteWindow{-10, 10}, Step{});
  auto so = occupation(step);
  for (long k = -10; k < 10; ++k) CHECK(so.at(k) == (k < 0 ? 1 : 0));

  // ring sites reduce mod L
  auto wrapped = occupation(ring, OccupationWindow{3, 3});
  CHECK(wrapped.eta == std::vector<std::uint8_t>{0, 1, 0});
}

TEST_CASE("height examples") {
  auto step = build_initial(InfiniteWindow{-10, 10}, Step{});
  auto hf = height_field(step, initial_anchor(step), 0.0);
  for (long x = -10; x <= 10; ++x) CHECK(hf.value(x) == std::abs(x));

  auto one = build_initial(InfiniteWindow{0, 2}, Explicit{{0}});
  auto h1 = height_field(one, initial_anchor(one), 0.0);
  CHECK(h1.value(0) == 2);
  CHECK(h1.value(1) == 1);
  CHECK(h1.value(2) == 2);
  CHECK(code_of([&] { h1.value(3); }) == Errc::out_of_range);
}

TEST_CASE("t_end = 0 gives an empty log") {
  auto cfg = build_initial(Ring{12}, Bernoulli{0.5, 3});
  auto traj = simulate(cfg, Rates::from_left(0.3), 0.0, 11);
  CHECK(traj.events.empty());
  CHECK(traj.final_config.sites == cfg.sites);
  CHECK(code_of([&] { simulate(cfg, Rates::from_left(0.3), -1.0, 1); }) == Errc::invalid_argument);
}

TEST_CASE("TASEP single particle: Poisson mean at t = 5") {
  auto cfg = build_initial(InfiniteWindow{-5, 80}, Explicit{{0}});
  const int runs = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < runs; ++i) {
    auto fin = simulate_final(cfg, Rates::tasep(), 5.0, substream_seed(99, i));
    double d = static_cast<double>(fin.config.sites[0]);
    sum += d;
    sum2 += d * d;
  }
  double mean = sum / runs;
  double var = sum2 / runs - mean * mean;
  CHECK(std::abs(mean - 5.0) < 3.0 * std::sqrt(5.0 / runs));
  CHECK(var == doctest::Approx(5.0).epsilon(0.03));
}

TEST_CASE("single particle: Skellam law vs master-equation and Bessel oracles") {
  const double p = 0.3, t = 2.0;
  Rates r = Rates::from_left(p);
  auto gen = exact::window_generator(1, -40, 40, r);
  Eigen::VectorXd law = exact::master_evolve(gen, exact::delta_distribution(gen, {0}), t);

  for (long k = -10; k <= 10; ++k) {
    double oracle = law[static_cast<Eigen::Index>(gen.find({k}))];
    CHECK(std::abs(oracle - skellam_pmf(k, p, r.q, t)) < 1e-12);
  }

  auto cfg = build_initial(InfiniteWindow{-40, 40}, Explicit{{0}});
  const int runs = 4000000;
  std::map<long, long> counts;
  for (int i = 0; i < runs; ++i) ++counts[simulate_final(cfg, r, t, substream_seed(5, i)).config.sites[0]];
  double tv = 0.0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    long k = gen.states[i][0];
    double emp = counts.count(k) ? static_cast<double>(counts[k]) / runs : 0.0;
    tv += std::abs(emp - law[static_cast<Eigen::Index>(i)]);
  }
  tv *= 0.5;
  CHECK(tv < 1e-3);
}

TEST_CASE("replay determinism, conservation and exclusion") {
  Rates r = Rates::from_left(0.35);
  auto ring = build_initial(Ring{30}, Bernoulli{0.4, 17});
  auto a = simulate(ring, r, 40.0, 123);
  auto b = simulate(ring, r, 40.0, 123);
  REQUIRE(a.events.size() == b.events.size());
  CHECK(a.final_config.sites == b.final_config.sites);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].particle == b.events[i].particle);
    CHECK(a.events[i].direction == b.events[i].direction);
  }
  for (std::size_t i = 1; i < a.events.size(); ++i) CHECK(a.events[i - 1].time < a.events[i].time);

  auto fin = simulate_final(ring, r, 40.0, 123);
  CHECK(fin.config.sites == a.final_config.sites);
  CHECK(fin.anchor == a.final_anchor);

  auto end = replay(a, a.t_end);
  CHECK(end.config.sites == a.final_config.sites);
  for (double t : {0.0, 5.0, 13.3, 27.0, 40.0}) {
    auto s = replay(a, t);
    CHECK(s.config.size() == ring.size());
    CHECK_NOTHROW(s.config.validate());
  }
  CHECK(code_of([&] { replay(a, 41.0); }) == Errc::out_of_range);
}

TEST_CASE("height increment identity along trajectories") {
  Rates r = Rates::from_left(0.25);
  auto traj = simulate(build_initial(step_window(30.0, r), Step{}), r, 30.0, 8);
  for (double t : {0.0, 3.0, 10.0, 30.0}) {
    auto s = replay(traj, t);
    auto hf = height_field(s.config, s.anchor, t);
    auto occ = occupation(s.config);
    for (long x = hf.x_lo; x < hf.x_hi; ++x) {
      int inc = static_cast<int>(hf.value(x + 1) - hf.value(x));
      CHECK(inc == 1 - 2 * occ.at(x));
    }
  }
}

TEST_CASE("tracked anchor equals direct summation for bounded data") {
  Rates r = Rates::from_left(0.4);
  auto cfg = build_initial(InfiniteWindow{-60, 60}, Explicit{{-6, -3, -2, 0, 1, 4, 9}});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto traj = simulate(cfg, r, 15.0, seed);
    for (double t : {0.0, 4.0, 9.5, 15.0}) {
      auto s = replay(traj, t);
      long right = std::count_if(s.config.sites.begin(), s.config.sites.end(), [](long k) { return k >= 0; });
      CHECK(s.anchor == 2 * right);
    }
  }
}

TEST_CASE("window escape is an error") {
  auto cfg = build_initial(InfiniteWindow{-3, 3}, Explicit{{0}});
  CHECK(code_of([&] { simulate(cfg, Rates::tasep(), 100.0, 1); }) == Errc::window_escape);
}

TEST_CASE("rescale_kpz") {
  HeightFamily lattice_h = [](double s, long x) { return 3.0 * s + static_cast<double>(x * x); };
  CHECK(rescale_kpz(lattice_h, 1.0, 0.0, 2.0, 3.0) == lattice_h(2.0, 3));

  double eps = 0.01;
  CHECK(kpz_time_argument(eps / 2.0, 1.0) / kpz_time_argument(eps, 1.0) == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(kpz_space_argument(0.1, 2.0) == 20);

  for (double e : {1.0, 0.25, 0.01}) {
    HeightFamily half = [](double s, long) { return s / 2.0; };
    double c = 0.5 / e;
    CHECK(std::abs(rescale_kpz(half, e, c, 1.0, 0.0)) < 1e-12);
  }
  CHECK(code_of([] { rescale_kpz([](double, long) { return 0.0; }, 0.0, 0.0, 1.0, 0.0); }) == Errc::invalid_argument);

  auto cfg = build_initial(InfiniteWindow{-50, 50}, Step{});
  auto traj = simulate(cfg, Rates::tasep(), 8.0, 2);
  CHECK(rescale_kpz(traj, 1.0, 0.0, 4.0, 3.0) == height(traj, 4.0).value(3));
  CHECK(code_of([&] { rescale_kpz(traj, 0.25, 0.0, 4.0, 0.0); }) == Errc::out_of_range);
}

TEST_CASE("burgers field") {
  BurgersScaling sc(0.25, 0.0);
  Rates r = sc.rates();
  CHECK(sc.consistent_with(r));
  CHECK(code_of([] { BurgersScaling(1.5, 0.0); }) == Errc::invalid_argument);

  auto empty = simulate(build_initial(InfiniteWindow{-40, 40}, Explicit{{}}), r, 1.0, 1);
  for (double X : {-5.0, 0.0, 3.3}) CHECK(burgers_field(empty, r, sc, 0.05, X) == doctest::Approx(2.0));

  auto full_cfg = build_initial(InfiniteWindow{-10, 10}, Bernoulli{1.0, 0});
  auto full = simulate(full_cfg, r, 0.0, 1);
  for (double X : {-2.0, 0.0, 2.2}) CHECK(burgers_field(full, r, sc, 0.0, X) == doctest::Approx(-2.0));

  CHECK(code_of([&] { burgers_field(empty, Rates::tasep(), sc, 0.1, 0.0); }) == Errc::invalid_argument);

  BurgersScaling unit(1.0, 0.0);
  Rates sym = unit.rates();
  auto ring = build_initial(InfiniteWindow{-2000, 2000}, Bernoulli{0.5, 77});
  auto traj = simulate(ring, sym, 0.0, 3);
  double sum = 0.0;
  int m = 0;
  for (long x = -1900; x < 1900; ++x, ++m) sum += burgers_field(traj, sym, unit, 0.0, static_cast<double>(x));
  double mean = sum / m;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("one-point statistic") {
  CHECK(code_of([] { one_point_rescaled(Rates(0.5, 0.5), 10.0, 4, 1); }) == Errc::invalid_argument);
  CHECK(code_of([] { one_point_rescaled(Rates(0.7, 0.3), 10.0, 4, 1); }) == Errc::invalid_argument);
  CHECK(one_point_statistic(500, 1000.0) == doctest::Approx(0.0));

  auto a = one_point_rescaled(Rates::tasep(), 40.0, 32, 9, 1);
  auto b = one_point_rescaled(Rates::tasep(), 40.0, 32, 9, 3);
  CHECK(a.heights == b.heights);
  CHECK(a.statistic.size() == 32);
  for (std::size_t i = 0; i < a.heights.size(); ++i)
    CHECK(a.statistic[i] == doctest::Approx(one_point_statistic(a.heights[i], 40.0)));
}
