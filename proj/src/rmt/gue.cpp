#include <cmath>

#include "kpzlab/error.hpp"
#include "kpzlab/random.hpp"
#include "kpzlab/rmt.hpp"

namespace kpz::rmt {

GUEMatrix sample_gue(int n, std::uint64_t seed) {
  require(n >= 1, Errc::invalid_argument, "GUE dimension must be positive");
  Rng rng = make_rng(seed);
  const double half = std::sqrt(0.5);
  GUEMatrix g{n, Eigen::MatrixXcd(n, n)};
  for (int i = 0; i < n; ++i) {
    g.m(i, i) = cplx(normal01(rng), 0.0);
    for (int j = i + 1; j < n; ++j) {
      double re = half * normal01(rng);
      double im = half * normal01(rng);
      g.m(i, j) = cplx(re, im);
      g.m(j, i) = cplx(re, -im);
    }
  }
  return g;
}

}  // namespace kpz::rmt
