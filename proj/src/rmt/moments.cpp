#include <cmath>

#include "kpzlab/error.hpp"
#include "kpzlab/parallel.hpp"
#include "kpzlab/random.hpp"
#include "kpzlab/rmt.hpp"

namespace kpz::rmt {

MomentEstimate trace_moment(int n, int j, std::size_t samples, std::uint64_t seed, unsigned workers) {
  require(j >= 0 && j <= 8, Errc::invalid_argument, "trace moment order must lie in [0,8]");
  require(n >= 1 && n <= 64, Errc::invalid_argument, "trace moment dimension must lie in [1,64]");
  MomentEstimate est;
  est.samples = samples;
  if (j == 0) {
    est.mean = n;
    return est;
  }
  require(samples >= 2, Errc::empty_sample, "need at least two samples");
  auto values = parallel_map<double>(samples, workers, [&](std::size_t i) {
    SpectralSample s = eigenvalues(sample_gue(n, substream_seed(seed, i)));
    double tr = 0.0;
    for (double lam : s.eigenvalues) tr += std::pow(lam, j);
    return tr;
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples - 1);
  est.mean = mean;
  est.stderr_ = std::sqrt(var / static_cast<double>(samples));
  return est;
}

std::map<int, long long> harer_zagier(int k) {
  require(k >= 0 && k <= 12, Errc::invalid_argument, "Harer-Zagier order must lie in [0,12]");
  // (k+1) T_k = 2 (2k-1) n T_{k-1} + (k-1)(2k-1)(2k-3) T_{k-2}
  std::vector<std::map<int, long long>> t(static_cast<std::size_t>(k + 1));
  t[0] = {{1, 1}};
  if (k >= 1) t[1] = {{2, 1}};
  for (int m = 2; m <= k; ++m) {
    std::map<int, long long> next;
    for (auto [pw, c] : t[static_cast<std::size_t>(m - 1)]) next[pw + 1] += 2LL * (2 * m - 1) * c;
    for (auto [pw, c] : t[static_cast<std::size_t>(m - 2)]) next[pw] += static_cast<long long>(m - 1) * (2 * m - 1) * (2 * m - 3) * c;
    for (auto& [pw, c] : next) {
      require(c % (m + 1) == 0, Errc::invalid_argument, "Harer-Zagier recursion lost integrality");
      c /= (m + 1);
    }
    t[static_cast<std::size_t>(m)] = next;
  }
  return t[static_cast<std::size_t>(k)];
}

double exact_trace_moment(int n, int j) {
  require(j >= 0, Errc::invalid_argument, "moment order must be nonnegative");
  if (j % 2) return 0.0;
  double acc = 0.0;
  for (auto [pw, c] : harer_zagier(j / 2)) acc += static_cast<double>(c) * std::pow(n, pw);
  return acc;
}

}  // namespace kpz::rmt
