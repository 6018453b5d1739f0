#include <algorithm>
#include <cmath>
#include <limits>

#include "kpzlab/error.hpp"
#include "kpzlab/random.hpp"
#include "kpzlab/rmt.hpp"

namespace kpz::rmt {

double coulomb_log_density(const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    acc -= 0.5 * y[i] * y[i];
    for (std::size_t k = i + 1; k < y.size(); ++k) {
      double gap = std::abs(y[i] - y[k]);
      if (gap == 0.0) return -std::numeric_limits<double>::infinity();
      acc += 2.0 * std::log(gap);
    }
  }
  return acc;
}

MetropolisResult metropolis_sample(int n, std::size_t steps, double sigma, std::uint64_t seed,
                                   const MetropolisOptions& options) {
  require(n >= 1, Errc::invalid_argument, "need at least one particle");
  require(sigma > 0.0, Errc::invalid_argument, "proposal scale must be positive");
  require(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0, Errc::invalid_argument,
          "burn-in fraction must lie in [0,1)");
  Rng rng = make_rng(seed);
  const auto nn = static_cast<std::size_t>(n);
  // start at semicircle quantiles, scaled to matrix units
  std::vector<double> y(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double target = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid) < target ? lo : hi) = mid;
    }
    y[i] = 0.5 * (lo + hi) * std::sqrt(static_cast<double>(n));
  }

  const auto burn = static_cast<std::size_t>(options.burn_in_fraction * static_cast<double>(steps));
  const std::size_t record = options.record_every ? options.record_every : nn;
  const std::size_t window = 50 * nn;
  MetropolisResult out;
  std::size_t accepted_window = 0, accepted_main = 0;
  for (std::size_t step = 0; step < steps; ++step) {
    auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    if (i >= nn) i = nn - 1;
    double proposal = y[i] + sigma * normal01(rng);
    double u = uniform01(rng);
    double delta = -0.5 * (proposal * proposal - y[i] * y[i]);
    bool coincident = false;
    for (std::size_t k = 0; k < nn; ++k) {
      if (k == i) continue;
      double gap_new = std::abs(proposal - y[k]);
      if (gap_new == 0.0) {
        coincident = true;
        break;
      }
      delta += 2.0 * (std::log(gap_new) - std::log(std::abs(y[i] - y[k])));
    }
    bool accept = false;
    if (coincident) {
      ++out.coincident_rejections;
    } else {
      accept = std::log1p(-u) < delta;
    }
    if (accept) y[i] = proposal;
    if (step < burn) {
      accepted_window += accept;
      if ((step + 1) % window == 0) {
        double rate = static_cast<double>(accepted_window) / static_cast<double>(window);
        sigma *= std::exp(rate - options.target_acceptance);
        accepted_window = 0;
      }
    } else {
      accepted_main += accept;
      if ((step - burn + 1) % record == 0) out.states.push_back(y);
    }
  }
  out.sigma = sigma;
  if (steps > burn) out.acceptance = static_cast<double>(accepted_main) / static_cast<double>(steps - burn);
  return out;
}

}  // namespace kpz::rmt
