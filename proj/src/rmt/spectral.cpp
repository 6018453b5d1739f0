#include <algorithm>
#include <cmath>

#include "kpzlab/error.hpp"
#include "kpzlab/rmt.hpp"

namespace kpz::rmt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double EmpiricalMeasure::cdf(double x) const {
  auto it = std::upper_bound(atoms.begin(), atoms.end(), x);
  return weight * static_cast<double>(it - atoms.begin());
}

EmpiricalMeasure esd(const SpectralSample& s) {
  EmpiricalMeasure mu;
  if (s.eigenvalues.empty()) return mu;
  const double scale = 1.0 / std::sqrt(static_cast<double>(s.n));
  for (double y : s.eigenvalues) mu.atoms.push_back(y * scale);
  std::sort(mu.atoms.begin(), mu.atoms.end());
  mu.weight = 1.0 / static_cast<double>(mu.atoms.size());
  return mu;
}

double semicircle(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

double semicircle_moment(int k) {
  require(k >= 0, Errc::invalid_argument, "moment order must be nonnegative");
  // (2/pi) int_0^pi (2 cos th)^k sin^2 th d th; the integrand is a
  // trigonometric polynomial, integrated exactly by enough trapezoid nodes
  const int nodes = 4 * (k + 4);
  double acc = 0.0;
  for (int i = 0; i < 2 * nodes; ++i) {
    double th = kPi * i / nodes;  // full period [0, 2 pi), halved below
    double s = std::sin(th);
    acc += std::pow(2.0 * std::cos(th), k) * s * s;
  }
  return (2.0 / kPi) * 0.5 * acc * (kPi / nodes);
}

cplx stieltjes(const EmpiricalMeasure& mu, cplx z) {
  require(z.imag() != 0.0, Errc::invalid_argument, "Stieltjes transform needs Im z != 0");
  cplx acc = 0.0;
  for (double x : mu.atoms) acc += 1.0 / (x - z);
  return acc * mu.weight;
}

cplx semicircle_stieltjes(cplx z) {
  require(z.imag() != 0.0, Errc::invalid_argument, "Stieltjes transform needs Im z != 0");
  cplx s = 0.5 * (-z + std::sqrt(z - 2.0) * std::sqrt(z + 2.0));
  // Herglotz branch: Im s has the sign of Im z
  if (s.imag() * z.imag() < 0.0) s = -z - s;
  return s;
}

double invert_stieltjes(const std::function<cplx(cplx)>& s, double x, const std::vector<double>& b_schedule) {
  require(!b_schedule.empty(), Errc::invalid_argument, "empty b schedule");
  double density = 0.0;
  for (double b : b_schedule) {
    require(b > 0.0, Errc::invalid_argument, "b must be positive");
    cplx diff = s(cplx(x, b)) - s(cplx(x, -b));
    density = (diff / cplx(0.0, 2.0 * kPi)).real();
  }
  return density;
}

double invert_stieltjes(const std::function<cplx(cplx)>& s, double x, double b) {
  return invert_stieltjes(s, x, std::vector<double>{b});
}

double edge_statistic(double y, int n) {
  require(n >= 2, Errc::invalid_argument, "edge statistic needs n >= 2");
  double nd = static_cast<double>(n);
  return (y - std::sqrt(2.0 * nd)) * std::sqrt(2.0) * std::pow(nd, 1.0 / 6.0);
}

double edge_rescale(const SpectralSample& s) {
  require(s.n >= 2 && !s.eigenvalues.empty(), Errc::invalid_argument, "edge statistic needs n >= 2");
  double top = *std::max_element(s.eigenvalues.begin(), s.eigenvalues.end());
  return edge_statistic(top / std::sqrt(2.0), s.n);
}

}  // namespace kpz::rmt
