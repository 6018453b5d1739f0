#include <algorithm>
#include <cmath>
#include <string>

#include "kpzlab/asep.hpp"
#include "kpzlab/error.hpp"
#include "kpzlab/random.hpp"

namespace kpz::asep {

Rates::Rates(double left, double right) : p(left), q(right) {
  require(std::isfinite(left) && std::isfinite(right) && left >= 0.0 && right >= 0.0,
          Errc::invalid_argument, "rates must be finite and nonnegative");
  require(std::abs(left + right - 1.0) <= 4e-16, Errc::invalid_argument, "rates must satisfy p + q = 1");
}

void ParticleConfig::validate() const {
  for (std::size_t i = 1; i < sites.size(); ++i)
    require(sites[i - 1] < sites[i], Errc::invalid_ordering, "particle sites must be strictly increasing");
  if (const auto* ring = std::get_if<Ring>(&lattice)) {
    require(ring->length > 0, Errc::invalid_argument, "ring length must be positive");
    require(static_cast<long>(sites.size()) < ring->length, Errc::invalid_argument,
            "ring requires N < L");
    require(left_reservoir == false, Errc::invalid_argument, "a ring has no reservoir");
    if (!sites.empty())
      require(sites.back() < sites.front() + ring->length, Errc::invalid_ordering,
              "ring lift requires x_N < x_1 + L");
    return;
  }
  const auto& win = std::get<InfiniteWindow>(lattice);
  require(win.lo < win.hi, Errc::invalid_argument, "window requires lo < hi");
  for (long k : sites)
    require(k >= win.lo && k <= win.hi - 1, Errc::window_escape,
            "particle site " + std::to_string(k) + " outside window");
  if (left_reservoir)
    require(!sites.empty() && sites.front() == win.lo, Errc::window_escape,
            "reservoir window needs its lowest site occupied");
}

namespace {

struct InitialBuilder {
  const LatticeKind& lattice;

  ParticleConfig operator()(const Step&) const {
    ParticleConfig cfg{{}, lattice, false};
    const auto* win = std::get_if<InfiniteWindow>(&lattice);
    require(win != nullptr, Errc::invalid_argument, "step initial condition needs an infinite-lattice window");
    require(win->lo < 0 && win->hi > 0, Errc::window_too_small, "step window must straddle the origin");
    for (long k = win->lo; k <= -1; ++k) cfg.sites.push_back(k);
    cfg.left_reservoir = true;
    return cfg;
  }

  ParticleConfig operator()(const Bernoulli& b) const {
    require(b.density >= 0.0 && b.density <= 1.0, Errc::invalid_argument, "density must lie in [0,1]");
    ParticleConfig cfg{{}, lattice, false};
    long first = 0, count = 0;
    if (const auto* ring = std::get_if<Ring>(&lattice)) {
      count = ring->length;
    } else {
      const auto& win = std::get<InfiniteWindow>(lattice);
      first = win.lo;
      count = win.hi - win.lo;
    }
    Rng rng = make_rng(b.seed);
    for (long k = 0; k < count; ++k)
      if (uniform01(rng) < b.density) cfg.sites.push_back(first + k);
    cfg.validate();
    return cfg;
  }

  ParticleConfig operator()(const Explicit& e) const {
    ParticleConfig cfg{e.sites, lattice, false};
    cfg.validate();
    return cfg;
  }
};

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

ParticleConfig build_initial(const LatticeKind& lattice, const InitialSpec& spec) {
  ParticleConfig cfg = std::visit(InitialBuilder{lattice}, spec);
  cfg.validate();
  return cfg;
}

long OccupationField::particles() const {
  long n = 0;
  for (auto e : eta) n += e;
  return n;
}

OccupationField occupation(const ParticleConfig& cfg, OccupationWindow window) {
  require(window.count >= 0, Errc::invalid_argument, "negative window size");
  OccupationField field{window.first, std::vector<std::uint8_t>(static_cast<std::size_t>(window.count), 0)};
  auto mark = [&](long site) {
    long idx = site - window.first;
    if (idx >= 0 && idx < window.count) field.eta[static_cast<std::size_t>(idx)] = 1;
  };
  if (const auto* ring = std::get_if<Ring>(&cfg.lattice)) {
    // every lattice site congruent to a particle is occupied
    for (long k : cfg.sites) {
      long base = floor_mod(k, ring->length);
      long start = window.first + floor_mod(base - window.first, ring->length);
      for (long s = start; s < window.first + window.count; s += ring->length) mark(s);
    }
    return field;
  }
  for (long k : cfg.sites) mark(k);
  if (cfg.left_reservoir) {
    const auto& win = std::get<InfiniteWindow>(cfg.lattice);
    for (long s = window.first; s < std::min(win.lo, window.first + window.count); ++s) mark(s);
  }
  return field;
}

OccupationField occupation(const ParticleConfig& cfg) {
  if (const auto* ring = std::get_if<Ring>(&cfg.lattice)) return occupation(cfg, {0, ring->length});
  const auto& win = std::get<InfiniteWindow>(cfg.lattice);
  return occupation(cfg, {win.lo, win.hi - win.lo});
}

long initial_anchor(const ParticleConfig& cfg) {
  if (cfg.on_ring()) return 2 * static_cast<long>(cfg.size());
  return 2 * static_cast<long>(std::count_if(cfg.sites.begin(), cfg.sites.end(), [](long k) { return k >= 0; }));
}

InfiniteWindow step_window(double t_end, const Rates&) {
  require(std::isfinite(t_end) && t_end >= 0.0, Errc::invalid_argument, "t_end must be finite and nonnegative");
  long half = static_cast<long>(std::ceil(t_end + 10.0 * std::sqrt(t_end) + 10.0));
  return {-half, half};
}

}  // namespace kpz::asep
