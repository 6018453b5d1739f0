#pragma once

// GUE sampling and spectra, the semicircle law and its Stieltjes transform,
// edge rescaling, the beta = 2 Coulomb gas, and trace moments.
//
// Entry law: Re M_ij, Im M_ij ~ N(0, 1/2) for i < j and M_ii ~ N(0, 1), so
// E|M_ij|^2 = 1 and the bulk spectrum fills [-2 sqrt(n), 2 sqrt(n)].

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace kpz::rmt {

using cplx = std::complex<double>;

struct GUEMatrix {
  int n = 0;
  Eigen::MatrixXcd m;
};

GUEMatrix sample_gue(int n, std::uint64_t seed);

struct SpectralSample {
  int n = 0;
  std::vector<double> eigenvalues;  // ascending
};

struct HermitianEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns, empty unless requested
  int iterations = 0;
};

/// Householder tridiagonalisation followed by implicit-shift QL. Deflation at
/// |e| <= 1e-12 ||M||_F; at most 50 n QL sweeps in total (no_convergence).
HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& m, bool want_vectors = false);

SpectralSample eigenvalues(const GUEMatrix& m);
SpectralSample eigenvalues(const Eigen::MatrixXcd& m);

struct EmpiricalMeasure {
  std::vector<double> atoms;  // y_i / sqrt(n)
  double weight = 0.0;        // 1 / n per atom

  double mass() const { return weight * static_cast<double>(atoms.size()); }
  double cdf(double x) const;
};

EmpiricalMeasure esd(const SpectralSample& s);

double semicircle(double x);
double semicircle_cdf(double x);
/// int x^k d mu_sc by the trapezoid rule in the angle variable x = 2 cos(theta).
double semicircle_moment(int k);

cplx stieltjes(const EmpiricalMeasure& mu, cplx z);
/// Closed form (-z + sqrt(z - 2) sqrt(z + 2)) / 2, the Herglotz root of s^2 + z s + 1 = 0.
cplx semicircle_stieltjes(cplx z);
/// (s(x + ib) - s(x - ib)) / (2 pi i), evaluated along the schedule; the last
/// (smallest) b is returned.
double invert_stieltjes(const std::function<cplx(cplx)>& s, double x, const std::vector<double>& b_schedule);
double invert_stieltjes(const std::function<cplx(cplx)>& s, double x, double b = 1e-4);

/// (y - sqrt(2n)) sqrt(2) n^{1/6}, with y in exp(-Tr M^2) units.
double edge_statistic(double y, int n);
/// Largest eigenvalue converted to exp(-Tr M^2) units (divide by sqrt 2) and
/// passed through edge_statistic.
double edge_rescale(const SpectralSample& s);

/// -1/2 sum y_i^2 + 2 sum_{j<k} log|y_j - y_k| (normalising constant dropped).
/// Returns -inf for coincident points.
double coulomb_log_density(const std::vector<double>& y);

struct MetropolisOptions {
  double burn_in_fraction = 0.2;
  double target_acceptance = 0.4;
  std::size_t record_every = 0;  // in single-coordinate steps; 0 means once per sweep (n steps)
};

struct MetropolisResult {
  std::vector<std::vector<double>> states;  // post-burn-in snapshots
  double acceptance = 0.0;                  // post-burn-in acceptance rate
  double sigma = 0.0;                       // tuned proposal scale
  std::size_t coincident_rejections = 0;
};

/// Random-scan single-coordinate Gaussian Metropolis chain for the eigenvalue
/// density; sigma is tuned during burn-in towards the target acceptance and
/// then frozen.
MetropolisResult metropolis_sample(int n, std::size_t steps, double sigma, std::uint64_t seed,
                                   const MetropolisOptions& options = {});

struct MomentEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo E[Tr M^j] over independent GUE draws (substream i per draw).
MomentEstimate trace_moment(int n, int j, std::size_t samples, std::uint64_t seed, unsigned workers = 1);

/// E[Tr M^{2k}] as a polynomial in n from the Harer-Zagier recursion:
/// coefficient map power -> integer.
std::map<int, long long> harer_zagier(int k);
/// Exact E[Tr M^j] evaluated at n (0 for odd j).
double exact_trace_moment(int n, int j);

}  // namespace kpz::rmt
