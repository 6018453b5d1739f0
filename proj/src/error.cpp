#include "kpzlab/error.hpp"

namespace kpz {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_ordering: return "invalid-ordering";
    case Errc::window_too_small: return "window-too-small";
    case Errc::window_escape: return "window-escape";
    case Errc::out_of_range: return "out-of-range";
    case Errc::state_space_too_large: return "state-space-too-large";
    case Errc::pole_proximity: return "pole-proximity";
    case Errc::no_convergence: return "no-convergence";
    case Errc::collided_roots: return "collided-roots";
    case Errc::null_vector: return "null-vector";
    case Errc::cache_miss: return "cache-miss";
    case Errc::essential_singularity: return "essential-singularity";
    case Errc::chart_singularity: return "chart-singularity";
    case Errc::grid_coverage: return "grid-coverage";
    case Errc::blow_up: return "blow-up";
    case Errc::empty_sample: return "empty-sample";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace kpz
