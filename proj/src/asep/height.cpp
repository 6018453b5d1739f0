#include <cmath>
#include <string>

#include "kpzlab/asep.hpp"
#include "kpzlab/error.hpp"
#include "kpzlab/parallel.hpp"
#include "kpzlab/random.hpp"

namespace kpz::asep {

long HeightField::value(long x) const {
  require(contains(x), Errc::out_of_range, "height requested outside the field at x=" + std::to_string(x));
  return values[static_cast<std::size_t>(x - x_lo)];
}

HeightField height_field(const ParticleConfig& cfg, long anchor, double time) {
  HeightField hf;
  hf.time = time;
  hf.anchor = anchor;
  OccupationField occ = occupation(cfg);
  hf.x_lo = occ.first;
  hf.x_hi = occ.first + static_cast<long>(occ.eta.size());
  require(hf.x_lo <= 0 && hf.x_hi >= 0, Errc::out_of_range, "height field must contain the origin");
  hf.values.assign(static_cast<std::size_t>(hf.x_hi - hf.x_lo + 1), 0);
  auto slot = [&](long x) -> int& { return hf.values[static_cast<std::size_t>(x - hf.x_lo)]; };
  slot(0) = static_cast<int>(anchor);
  long h = anchor;
  for (long x = 1; x <= hf.x_hi; ++x) {
    h += 1 - 2 * occ.at(x - 1);
    slot(x) = static_cast<int>(h);
  }
  h = anchor;
  for (long x = -1; x >= hf.x_lo; --x) {
    h -= 1 - 2 * occ.at(x);
    slot(x) = static_cast<int>(h);
  }
  return hf;
}

HeightField height(const TrajectorySample& traj, double t) {
  FinalState s = replay(traj, t);
  return height_field(s.config, s.anchor, t);
}

double kpz_time_argument(double eps, double t) { return std::pow(eps, -1.5) * t; }

long kpz_space_argument(double eps, double x) { return std::lround(x / eps); }

double rescale_kpz(const HeightFamily& h, double eps, double c_eps, double t, double x) {
  require(eps > 0.0 && std::isfinite(eps), Errc::invalid_argument, "epsilon must be positive");
  return std::sqrt(eps) * h(kpz_time_argument(eps, t), kpz_space_argument(eps, x)) - c_eps * t;
}

double rescale_kpz(const TrajectorySample& traj, double eps, double c_eps, double t, double x) {
  require(eps > 0.0 && std::isfinite(eps), Errc::invalid_argument, "epsilon must be positive");
  double s = kpz_time_argument(eps, t);
  require(s >= 0.0 && s <= traj.t_end, Errc::out_of_range, "rescaled time outside the simulated range");
  HeightFamily family = [&](double time, long site) {
    HeightField hf = height(traj, time);
    return static_cast<double>(hf.value(site));
  };
  return rescale_kpz(family, eps, c_eps, t, x);
}

BurgersScaling::BurgersScaling(double eps, double lam) : epsilon(eps), lambda(lam) {
  require(eps > 0.0 && eps <= 1.0, Errc::invalid_argument, "epsilon must lie in (0,1]");
  require(std::isfinite(lam) && std::abs(lam) * std::sqrt(eps) <= 1.0, Errc::invalid_argument,
          "|lambda| sqrt(eps) must not exceed 1");
}

Rates BurgersScaling::rates() const {
  double drift = lambda * std::sqrt(epsilon);
  return Rates(0.5 * (1.0 + drift), 0.5 * (1.0 - drift));
}

bool BurgersScaling::consistent_with(const Rates& r) const {
  return std::abs(r.p - r.q - lambda * std::sqrt(epsilon)) < 1e-12;
}

double burgers_field(const TrajectorySample& traj, const Rates& rates, const BurgersScaling& scaling,
                     double big_t, double big_x) {
  require(scaling.consistent_with(rates), Errc::invalid_argument, "rates inconsistent with p - q = lambda sqrt(eps)");
  double eps = scaling.epsilon;
  double s = big_t / (eps * eps);
  require(s >= 0.0 && s <= traj.t_end, Errc::out_of_range, "rescaled time outside the simulated range");
  long site = static_cast<long>(std::floor(big_x / eps));
  FinalState st = replay(traj, s);
  if (const auto* win = std::get_if<InfiniteWindow>(&st.config.lattice))
    require(site >= win->lo && site <= win->hi - 1, Errc::out_of_range, "site outside the simulated window");
  OccupationField occ = occupation(st.config, {site, 1});
  return (1.0 - 2.0 * occ.eta[0]) / std::sqrt(eps);
}

double one_point_statistic(long height_at_origin, double t) {
  return (0.5 * static_cast<double>(height_at_origin) - 0.25 * t) / (std::pow(2.0, -4.0 / 3.0) * std::cbrt(t));
}

OnePointSample one_point_rescaled(const Rates& rates, double t, std::size_t trajectories, std::uint64_t seed_root,
                                  unsigned workers) {
  require(rates.q > rates.p, Errc::invalid_argument, "one-point statistic needs q > p");
  require(t > 0.0 && std::isfinite(t), Errc::invalid_argument, "t must be positive");
  double t_run = t / (rates.q - rates.p);
  ParticleConfig cfg = build_initial(step_window(t_run, rates), Step{});
  struct Draw {
    long h = 0;
    double jitter = 0.0;
  };
  auto draws = parallel_map<Draw>(trajectories, workers, [&](std::size_t i) {
    std::uint64_t seed = substream_seed(seed_root, i);
    FinalState s = simulate_final(cfg, rates, t_run, seed);
    Rng jitter_rng = make_rng(seed, 1);
    return Draw{s.anchor, uniform01(jitter_rng)};
  });
  OnePointSample out;
  double scale = std::pow(2.0, -4.0 / 3.0) * std::cbrt(t);
  for (const auto& d : draws) {
    out.heights.push_back(d.h);
    out.statistic.push_back(one_point_statistic(d.h, t));
    out.dequantized.push_back((0.5 * static_cast<double>(d.h) + d.jitter - 0.25 * t) / scale);
  }
  return out;
}

}  // namespace kpz::asep
