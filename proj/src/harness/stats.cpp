#include <algorithm>
#include <cmath>

#include "kpzlab/error.hpp"
#include "kpzlab/harness.hpp"

namespace kpz::harness {

Ecdf::Ecdf(std::vector<double> sample) : x_(std::move(sample)) {
  require(!x_.empty(), Errc::empty_sample, "empirical CDF of an empty sample");
  std::sort(x_.begin(), x_.end());
}

double Ecdf::operator()(double s) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), s);
  return static_cast<double>(it - x_.begin()) / static_cast<double>(x_.size());
}

KsStatistic ks_distance(const std::vector<double>& sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), Errc::empty_sample, "KS distance of an empty sample");
  std::vector<double> x = sample;
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / m - f), std::abs(static_cast<double>(i) / m - f)});
  }
  return {std::min(d, 1.0), x.size()};
}

double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  require(!a.empty() && !b.empty(), Errc::empty_sample, "KS distance of an empty sample");
  std::vector<double> x = a, y = b;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double dkw_radius(std::size_t m, double alpha) {
  require(m > 0, Errc::empty_sample, "DKW radius needs m >= 1");
  require(alpha > 0.0 && alpha < 1.0, Errc::invalid_argument, "alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

MeanStd mean_std(const std::vector<double>& x) {
  require(!x.empty(), Errc::empty_sample, "mean of an empty sample");
  MeanStd r;
  for (double v : x) r.mean += v;
  r.mean /= static_cast<double>(x.size());
  if (x.size() > 1) {
    for (double v : x) r.variance += (v - r.mean) * (v - r.mean);
    r.variance /= static_cast<double>(x.size() - 1);
    r.stderr_ = std::sqrt(r.variance / static_cast<double>(x.size()));
  }
  return r;
}

Check check_close(std::string name, double value, double target, double tolerance) {
  return {std::move(name), value, target, tolerance, std::abs(value - target) < tolerance};
}

Check check_below(std::string name, double value, double bound) {
  return {std::move(name), value, 0.0, bound, value < bound};
}

json Report::to_json() const {
  json checks_j = json::array();
  for (const auto& c : checks)
    checks_j.push_back({{"name", c.name}, {"value", c.value}, {"target", c.target}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  return {{"id", id}, {"pass", pass}, {"checks", checks_j}, {"details", details}, {"artifacts", artifacts}, {"seconds", seconds},
          {"build", git_describe()}};
}

}  // namespace kpz::harness
