#pragma once

// Exact solvers for small ASEP systems: generator matrices on a ring or a
// truncated window of Z, uniformization, the nested contour-integral
// transition probability, and Bethe roots with their eigenvectors.
//
// Configurations use the site indices of asep.hpp. Generators are Q-matrices:
// A(x, x') is the rate from x to x', rows sum to zero (minus any killed mass on
// a window), and the law evolves by d/dt P = A^T P.

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kpzlab/asep.hpp"

namespace kpz::exact {

using asep::Rates;
using cplx = std::complex<double>;
using State = std::vector<long>;

struct GeneratorMatrix {
  int n_particles = 0;
  asep::LatticeKind lattice;
  Rates rates;
  std::vector<State> states;  // lexicographic order
  std::map<State, std::size_t> index;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;

  std::size_t size() const { return states.size(); }
  /// Index of a configuration; ring states are reduced mod L and sorted first.
  std::size_t find(const State& x) const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(A); }
};

/// Ring generator. Requires 1 <= N < L <= 14.
GeneratorMatrix generator(int n, long length, const Rates& rates);

/// Generator on the truncated space of N particles inside sites [lo, hi-1] of
/// Z. Jumps leaving the window are killed (they keep their diagonal rate), so
/// probability is sub-conserved. Caps the state count at 250000.
GeneratorMatrix window_generator(int n, long lo, long hi, const Rates& rates);

struct EvolveOptions {
  double tail = 1e-12;
  std::size_t max_terms = 2'000'000;
};

/// e^{A^T t} pi0 by uniformization at rate Lambda = N.
Eigen::VectorXd master_evolve(const GeneratorMatrix& A, const Eigen::VectorXd& pi0, double t,
                              const EvolveOptions& options = {});

/// Point mass on configuration x.
Eigen::VectorXd delta_distribution(const GeneratorMatrix& A, const State& x);

/// Inversion-product amplitude
///   prod_{i<j, s(i)>s(j)} -(p + q xi_s(i) xi_s(j) - xi_s(i)) / (p + q xi_s(i) xi_s(j) - xi_s(j)).
/// sigma is a zero-based permutation. Throws pole_proximity if a denominator
/// is within 1e-10 of zero.
cplx amplitude(const std::vector<int>& sigma, const std::vector<cplx>& xi, const Rates& rates);

struct ContourSpec {
  double radius = 0.5;
  int nodes = 128;
  int max_shrink = 6;
};

struct ContourResult {
  double value = 0.0;
  double imag = 0.0;
  double radius = 0.0;  // radius actually used after shrinking
  int nodes = 0;  // nodes of the returned value (2M)
  double doubling_change = 0.0;  // |value(2M) - value(M)|
};

/// Nested contour-integral transition probability P_y(x; t) for N <= 3
/// particles on Z, evaluated with M and 2M nodes; the 2M value is returned.
/// Throws no_convergence when doubling M moves the value by more than 1e-8.
ContourResult transition_probability(const State& y, const State& x, double t, const Rates& rates,
                                     const ContourSpec& contour = {});

/// Same quantity from a window generator, used as the reference.
double uniformization_probability(const State& y, const State& x, double t, const Rates& rates, long lo, long hi);

/// max_j |z_j^L - (-1)^{N-1} prod_i (p + q z_i z_j - z_j) / (p + q z_j z_i - z_i)|.
double bethe_residual(const std::vector<cplx>& z, long length, const Rates& rates);

struct BetheRoots {
  std::vector<cplx> z;
  std::vector<int> quantum_numbers;
  long length = 0;
  Rates rates;
  double residual = 0.0;
  cplx energy{0.0, 0.0};
};

struct BetheOptions {
  int homotopy_steps = 50;
  int newton_iterations = 60;
  double tolerance = 1e-10;
};

/// Continuation in the interaction strength: s = 0 gives the free roots
/// z_j = exp(i (pi (N-1) + 2 pi k_j) / L) and s = 1 the Bethe equations, each
/// step corrected by Newton on the logarithmic form. Requires N <= 3, L <= 10.
BetheRoots bethe_solve(int n, long length, const Rates& rates, const std::vector<int>& quantum_numbers,
                       const BetheOptions& options = {});

/// Newton refinement of given start roots at full interaction.
BetheRoots bethe_refine(const std::vector<cplx>& start, long length, const Rates& rates,
                        const BetheOptions& options = {});

cplx bethe_energy(const std::vector<cplx>& z, const Rates& rates);

struct BetheEigenpair {
  cplx energy;
  Eigen::VectorXcd vector;  // indexed by generator(N, L).states
  double generator_residual = 0.0;  // ||A v - E v||_inf / ||v||_inf
  double periodic_residual = 0.0;
};

/// u(x) = sum_sigma A_sigma(z) prod_j z_sigma(j)^{x_j} on ring configurations.
BetheEigenpair bethe_eigenpair(const BetheRoots& roots);

struct BetheSpectrum {
  std::vector<BetheRoots> accepted;
  std::vector<BetheEigenpair> pairs;
  std::size_t attempted = 0;
  std::size_t failed = 0;
  std::size_t duplicates = 0;  // converged onto an already accepted root set
  double coverage = 0.0;  // fraction of generator eigenvalues matched (with multiplicity)
  double max_eigenvalue_mismatch = 0.0;  // distance of an accepted energy to the nearest eigenvalue
};

/// Runs every increasing quantum-number tuple in [0, L) and matches the
/// accepted energies against the dense generator spectrum.
BetheSpectrum bethe_spectrum(int n, long length, const Rates& rates, const BetheOptions& options = {});

}  // namespace kpz::exact
