#pragma once

// Continuous-time ASEP on a ring or on a finite window of the infinite
// lattice, together with the height function and its KPZ rescalings.
//
// Site convention: particles live on Z + 1/2 and the height on Z. A particle
// is stored by its integer site index k, standing for the position k + 1/2,
// so that h(x + 1) - h(x) = 1 - 2 eta(k = x). Ring configurations are stored
// as lifted coordinates x_1 < ... < x_N < x_1 + L; occupation is taken mod L.
//
// Rates: p is the probability of a left jump per clock ring and q = 1 - p the
// probability of a right jump.

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

namespace kpz::asep {

struct Rates {
  double p = 0.5;  // left
  double q = 0.5;  // right

  Rates() = default;
  /// Throws invalid_argument unless p, q >= 0 and p + q == 1 exactly.
  Rates(double left, double right);
  static Rates from_left(double left) { return Rates(left, 1.0 - left); }
  static Rates tasep() { return Rates(0.0, 1.0); }
  /// Mirror image: left and right exchanged.
  Rates mirrored() const { return Rates(q, p); }
};

struct Ring {
  long length = 0;
};

/// Sites k with lo <= k <= hi - 1, i.e. positions strictly inside (lo, hi).
struct InfiniteWindow {
  long lo = 0;
  long hi = 0;
};

using LatticeKind = std::variant<Ring, InfiniteWindow>;

struct ParticleConfig {
  std::vector<long> sites;  // strictly increasing site indices
  LatticeKind lattice;
  // Sites below the window are all occupied (truncated step initial data).
  // Left jumps out of the window are then blocked, and the window fails once
  // its lowest site empties.
  bool left_reservoir = false;

  std::size_t size() const { return sites.size(); }
  bool on_ring() const { return std::holds_alternative<Ring>(lattice); }
  /// Checks ordering, window membership and N < L. Throws on violation.
  void validate() const;
};

struct Step {};
struct Bernoulli {
  double density = 0.5;
  std::uint64_t seed = 0;
};
struct Explicit {
  std::vector<long> sites;
};
using InitialSpec = std::variant<Step, Bernoulli, Explicit>;

ParticleConfig build_initial(const LatticeKind& lattice, const InitialSpec& spec);

struct Event {
  double time = 0.0;
  std::uint32_t particle = 0;
  std::int8_t direction = 0;  // -1 left, +1 right
};

struct TrajectorySample {
  ParticleConfig initial;
  std::vector<Event> events;  // executed jumps only, strictly increasing times
  double t_end = 0.0;
  std::uint64_t seed = 0;
  ParticleConfig final_config;
  long final_anchor = 0;  // h(t_end, 0)
};

/// Exact event-driven realisation: one exponential clock of rate N, uniform
/// particle choice, left with probability p, executed only if the target site
/// is empty. Throws window_escape when a particle would leave an
/// InfiniteWindow (or when the reservoir edge empties).
TrajectorySample simulate(const ParticleConfig& cfg, const Rates& rates, double t_end,
                          std::uint64_t seed);

struct FinalState {
  ParticleConfig config;
  long anchor = 0;
};

/// Same random stream and dynamics as simulate(), without storing the log.
FinalState simulate_final(const ParticleConfig& cfg, const Rates& rates, double t_end,
                          std::uint64_t seed);

/// Replays the log up to time t (inclusive). Throws out_of_range if t is
/// outside [0, t_end].
FinalState replay(const TrajectorySample& traj, double t);

struct OccupationWindow {
  long first = 0;  // first site index
  long count = 0;
};

struct OccupationField {
  long first = 0;
  std::vector<std::uint8_t> eta;

  long particles() const;
  std::uint8_t at(long site) const { return eta.at(static_cast<std::size_t>(site - first)); }
};

/// Indicator field over the requested sites. Ring sites are reduced mod L.
OccupationField occupation(const ParticleConfig& cfg, OccupationWindow window);
/// Occupation over the full lattice window (ring: 0..L-1; window: lo..hi-1).
OccupationField occupation(const ParticleConfig& cfg);

/// h(0) for a configuration with no history: twice the particles on sites
/// k >= 0 of the window (the reservoir lies entirely left of the origin).
long initial_anchor(const ParticleConfig& cfg);

struct HeightField {
  double time = 0.0;
  long x_lo = 0;  // heights are defined on x_lo..x_hi
  long x_hi = 0;
  long anchor = 0;  // h(t, 0)
  std::vector<int> values;

  long value(long x) const;
  bool contains(long x) const { return x >= x_lo && x <= x_hi; }
};

/// Builds h(t, .) from a configuration and the tracked anchor h(t, 0) using
/// the two-branch sum (x >= 1 and x <= -1). The origin must lie in the
/// height range.
HeightField height_field(const ParticleConfig& cfg, long anchor, double time);

HeightField height(const TrajectorySample& traj, double t);

/// Height family h(s, x) sampled at nearest lattice sites.
using HeightFamily = std::function<double(double s, long x)>;

/// Time argument eps^{-3/2} t of the 1:2:3 scaling.
double kpz_time_argument(double eps, double t);
/// Space argument eps^{-1} x rounded to the nearest lattice site.
long kpz_space_argument(double eps, double x);

/// eps^{1/2} h(eps^{-3/2} t, eps^{-1} x) - c_eps t.
double rescale_kpz(const HeightFamily& h, double eps, double c_eps, double t, double x);
double rescale_kpz(const TrajectorySample& traj, double eps, double c_eps, double t, double x);

struct BurgersScaling {
  double epsilon = 1.0;
  double lambda = 0.0;

  BurgersScaling(double eps, double lam);
  /// Rates with p - q = lambda sqrt(eps).
  Rates rates() const;
  bool consistent_with(const Rates& r) const;
};

/// eps^{-1/2} (1 - 2 eta_{eps^{-2} T}(floor(eps^{-1} X))).
double burgers_field(const TrajectorySample& traj, const Rates& rates, const BurgersScaling& scaling,
                     double big_t, double big_x);

/// Window for a truncated step initial condition that keeps the exterior
/// invisible up to time t_end (ten standard deviations past the free fronts).
InfiniteWindow step_window(double t_end, const Rates& rates);

/// (h / 2 - t / 4) / (2^{-4/3} t^{1/3}), with h the height at the origin at
/// time t / (q - p).
double one_point_statistic(long height_at_origin, double t);

struct OnePointSample {
  std::vector<double> statistic;    // raw lattice-valued statistic
  std::vector<double> dequantized;  // with the particle count spread uniformly over its unit cell
  std::vector<long> heights;        // h(t/(q-p), 0)
};

/// One statistic per trajectory, step initial condition, trajectory i using
/// substream i of seed_root. Throws invalid_argument if q <= p.
OnePointSample one_point_rescaled(const Rates& rates, double t, std::size_t trajectories,
                                  std::uint64_t seed_root, unsigned workers = 1);

}  // namespace kpz::asep
