#include <cmath>
#include <string>

#include "kpzlab/asep.hpp"
#include "kpzlab/error.hpp"
#include "kpzlab/random.hpp"

namespace kpz::asep {

namespace {

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// Mutable state shared by the simulator and the log replayer.
class Walker {
 public:
  Walker(const ParticleConfig& cfg, long anchor) : cfg_(cfg), anchor_(anchor) {
    if (const auto* ring = std::get_if<Ring>(&cfg_.lattice)) {
      ring_ = true;
      length_ = ring->length;
    } else {
      const auto& win = std::get<InfiniteWindow>(cfg_.lattice);
      lo_ = win.lo;
      hi_ = win.hi;
    }
  }

  // Returns false when the target is occupied (the attempt is suppressed).
  bool attempt(std::size_t i, int dir) {
    auto& x = cfg_.sites;
    const std::size_t n = x.size();
    long from = x[i];
    long to = from + dir;
    if (ring_) {
      if (dir > 0) {
        long next = (i + 1 < n) ? x[i + 1] : x[0] + length_;
        if (to == next) return false;
        if (floor_mod(to, length_) == 0) anchor_ += 2;
      } else {
        long prev = (i > 0) ? x[i - 1] : x[n - 1] - length_;
        if (to == prev) return false;
        if (floor_mod(from, length_) == 0) anchor_ -= 2;
      }
      x[i] = to;
      return true;
    }
    if (dir > 0) {
      if (i + 1 < n && to == x[i + 1]) return false;
      if (to > hi_ - 1) fail(Errc::window_escape, "particle left the window at the right edge");
      if (cfg_.left_reservoir && i == 0 && from == lo_)
        fail(Errc::window_escape, "reservoir edge emptied; window too small for this time");
      if (to == 0) anchor_ += 2;
    } else {
      if (i > 0 && to == x[i - 1]) return false;
      if (to < lo_) {
        if (cfg_.left_reservoir) return false;
        fail(Errc::window_escape, "particle left the window at the left edge");
      }
      if (from == 0) anchor_ -= 2;
    }
    x[i] = to;
    return true;
  }

  const ParticleConfig& config() const { return cfg_; }
  long anchor() const { return anchor_; }

 private:
  ParticleConfig cfg_;
  long anchor_;
  bool ring_ = false;
  long length_ = 0, lo_ = 0, hi_ = 0;
};

template <class OnEvent>
Walker run(const ParticleConfig& cfg, const Rates& rates, double t_end, std::uint64_t seed, OnEvent&& on_event) {
  require(std::isfinite(t_end) && t_end >= 0.0, Errc::invalid_argument, "t_end must be finite and nonnegative");
  cfg.validate();
  Walker walker(cfg, initial_anchor(cfg));
  const std::size_t n = cfg.size();
  if (n == 0) return walker;
  Rng rng = make_rng(seed);
  const double total_rate = static_cast<double>(n);
  double t = 0.0;
  for (;;) {
    t += exponential(rng, total_rate);
    if (t > t_end) break;
    auto i = static_cast<std::size_t>(uniform01(rng) * total_rate);
    if (i >= n) i = n - 1;
    int dir = uniform01(rng) < rates.p ? -1 : 1;
    if (walker.attempt(i, dir)) on_event(t, i, dir);
  }
  return walker;
}

}  // namespace

TrajectorySample simulate(const ParticleConfig& cfg, const Rates& rates, double t_end, std::uint64_t seed) {
  TrajectorySample out;
  out.initial = cfg;
  out.t_end = t_end;
  out.seed = seed;
  Walker w = run(cfg, rates, t_end, seed, [&](double t, std::size_t i, int dir) {
    out.events.push_back({t, static_cast<std::uint32_t>(i), static_cast<std::int8_t>(dir)});
  });
  out.final_config = w.config();
  out.final_anchor = w.anchor();
  return out;
}

FinalState simulate_final(const ParticleConfig& cfg, const Rates& rates, double t_end, std::uint64_t seed) {
  Walker w = run(cfg, rates, t_end, seed, [](double, std::size_t, int) {});
  return {w.config(), w.anchor()};
}

FinalState replay(const TrajectorySample& traj, double t) {
  require(t >= 0.0 && t <= traj.t_end, Errc::out_of_range,
          "replay time " + std::to_string(t) + " outside [0, " + std::to_string(traj.t_end) + "]");
  Walker w(traj.initial, initial_anchor(traj.initial));
  for (const auto& e : traj.events) {
    if (e.time > t) break;
    bool moved = w.attempt(e.particle, e.direction);
    require(moved, Errc::invalid_ordering, "event log replays a blocked jump");
  }
  return {w.config(), w.anchor()};
}

}  // namespace kpz::asep
