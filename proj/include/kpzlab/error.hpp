#pragma once

#include <stdexcept>
#include <string>

namespace kpz {

/// Failure categories shared by every module. The C API maps these one-to-one
/// onto its status codes, so the numeric values are part of the ABI.
enum class Errc : int {
  invalid_argument = 1,
  invalid_ordering = 2,
  window_too_small = 3,
  window_escape = 4,
  out_of_range = 5,
  state_space_too_large = 6,
  pole_proximity = 7,
  no_convergence = 8,
  collided_roots = 9,
  null_vector = 10,
  cache_miss = 11,
  essential_singularity = 12,
  chart_singularity = 13,
  grid_coverage = 14,
  blow_up = 15,
  empty_sample = 16,
  config = 17,
  io = 18,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace kpz
