#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"

namespace kpz::exact {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

struct Pair {
  cplx num, den;
};

Pair ratio_parts(cplx zi, cplx zj, const Rates& r) {
  cplx prod = r.q * zi * zj;
  return {r.p + prod - zj, r.p + prod - zi};
}

void check_denominators(const std::vector<cplx>& z, const Rates& rates) {
  for (std::size_t j = 0; j < z.size(); ++j)
    for (std::size_t i = 0; i < z.size(); ++i)
      if (i != j)
        require(std::abs(ratio_parts(z[i], z[j], rates).den) > 1e-10, Errc::pole_proximity,
                "Bethe denominator vanishes");
}

double min_gap(const std::vector<cplx>& z) {
  double gap = INFINITY;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) gap = std::min(gap, std::abs(z[i] - z[j]));
  return gap;
}

// Logarithmic Bethe system at interaction strength s:
//   F_j = L w_j - i pi (N-1) - 2 pi i k_j - s sum_{i != j} log R_ij,  z = e^w.
// Branches of log R_ij are carried continuously in `logs`.
class LogSystem {
 public:
  LogSystem(long length, const Rates& rates, std::vector<int> k)
      : length_(length), rates_(rates), k_(std::move(k)), n_(static_cast<int>(k_.size())) {}

  void init_logs(const std::vector<cplx>& z) {
    logs_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        if (i != j) {
          Pair r = ratio_parts(z[i], z[j], rates_);
          logs_[idx(i, j)] = std::log(r.num / r.den);
        }
  }

  // Updates each log by the principal increment from its last value.
  void advance_logs(const std::vector<cplx>& z) {
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        if (i != j) {
          Pair r = ratio_parts(z[i], z[j], rates_);
          cplx target = r.num / r.den;
          cplx prev = std::exp(logs_[idx(i, j)]);
          logs_[idx(i, j)] += std::log(target / prev);
        }
  }

  Eigen::VectorXcd residual(const Eigen::VectorXcd& w, double s) const {
    Eigen::VectorXcd f(n_);
    for (int j = 0; j < n_; ++j) {
      cplx acc = static_cast<double>(length_) * w[j] - kI * kPi * static_cast<double>(n_ - 1) -
                 2.0 * kPi * kI * static_cast<double>(k_[static_cast<std::size_t>(j)]);
      for (int i = 0; i < n_; ++i)
        if (i != j) acc -= s * logs_[idx(i, j)];
      f[j] = acc;
    }
    return f;
  }

  Eigen::MatrixXcd jacobian(const std::vector<cplx>& z, double s) const {
    Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) {
      jac(j, j) += static_cast<double>(length_);
      for (int i = 0; i < n_; ++i) {
        if (i == j) continue;
        Pair r = ratio_parts(z[i], z[j], rates_);
        cplx prod = rates_.q * z[i] * z[j];
        // d/dw of log num - log den
        cplx dnum_i = prod, dnum_j = prod - z[j];
        cplx dden_i = prod - z[i], dden_j = prod;
        jac(j, i) -= s * (dnum_i / r.num - dden_i / r.den);
        jac(j, j) -= s * (dnum_j / r.num - dden_j / r.den);
      }
    }
    return jac;
  }

  // Newton at fixed s with branch tracking; returns false on failure.
  bool newton(Eigen::VectorXcd& w, double s, int iterations, double tol) {
    for (int it = 0; it < iterations; ++it) {
      std::vector<cplx> z = to_z(w);
      if (!denominators_ok(z)) return false;
      advance_logs(z);
      Eigen::VectorXcd f = residual(w, s);
      if (f.cwiseAbs().maxCoeff() < tol) return true;
      Eigen::VectorXcd step = jacobian(z, s).partialPivLu().solve(f);
      if (!step.allFinite()) return false;
      // damp large steps so the tracked branch stays continuous
      double big = step.cwiseAbs().maxCoeff();
      if (big > 0.5) step *= 0.5 / big;
      w -= step;
    }
    std::vector<cplx> z = to_z(w);
    if (!denominators_ok(z)) return false;
    advance_logs(z);
    return residual(w, s).cwiseAbs().maxCoeff() < tol;
  }

  static std::vector<cplx> to_z(const Eigen::VectorXcd& w) {
    std::vector<cplx> z(static_cast<std::size_t>(w.size()));
    for (Eigen::Index j = 0; j < w.size(); ++j) z[static_cast<std::size_t>(j)] = std::exp(w[j]);
    return z;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }
  bool denominators_ok(const std::vector<cplx>& z) const {
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        if (i != j && std::abs(ratio_parts(z[i], z[j], rates_).den) < 1e-12) return false;
    return true;
  }

  long length_;
  Rates rates_;
  std::vector<int> k_;
  int n_;
  std::vector<cplx> logs_;
};

BetheRoots finish(std::vector<cplx> z, std::vector<int> k, long length, const Rates& rates, double tol) {
  require(min_gap(z) > 1e-8, Errc::collided_roots, "Bethe roots collided");
  BetheRoots out;
  out.z = std::move(z);
  out.quantum_numbers = std::move(k);
  out.length = length;
  out.rates = rates;
  out.residual = bethe_residual(out.z, length, rates);
  out.energy = bethe_energy(out.z, rates);
  require(out.residual < tol, Errc::no_convergence, "Bethe residual above tolerance");
  return out;
}

bool same_root_set(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<bool> hit(b.size(), false);
  for (cplx za : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size() && !found; ++i)
      if (!hit[i] && std::abs(za - b[i]) < 1e-8) hit[i] = found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace

double bethe_residual(const std::vector<cplx>& z, long length, const Rates& rates) {
  check_denominators(z, rates);
  const std::size_t n = z.size();
  double sign = (n % 2 == 1) ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cplx rhs = sign;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      Pair r = ratio_parts(z[i], z[j], rates);
      rhs *= r.num / r.den;
    }
    worst = std::max(worst, std::abs(std::pow(z[j], static_cast<int>(length)) - rhs));
  }
  return worst;
}

cplx bethe_energy(const std::vector<cplx>& z, const Rates& rates) {
  cplx e = 0.0;
  for (cplx zj : z) e += rates.p / zj + rates.q * zj - 1.0;
  return e;
}

BetheRoots bethe_solve(int n, long length, const Rates& rates, const std::vector<int>& quantum_numbers,
                       const BetheOptions& options) {
  require(n >= 1 && n <= 3 && length <= 10 && n < length, Errc::invalid_argument,
          "Bethe solver supports N <= 3, N < L <= 10");
  require(static_cast<int>(quantum_numbers.size()) == n, Errc::invalid_argument, "need N quantum numbers");
  LogSystem sys(length, rates, quantum_numbers);
  Eigen::VectorXcd w(n);
  for (int j = 0; j < n; ++j)
    w[j] = kI * (kPi * (n - 1) + 2.0 * kPi * quantum_numbers[static_cast<std::size_t>(j)]) /
           static_cast<double>(length);
  std::vector<cplx> z = LogSystem::to_z(w);
  require(min_gap(z) > 1e-8, Errc::collided_roots, "free roots coincide; quantum numbers must differ mod L");
  sys.init_logs(z);
  for (int step = 1; step <= options.homotopy_steps; ++step) {
    double s = static_cast<double>(step) / options.homotopy_steps;
    bool ok = sys.newton(w, s, options.newton_iterations, step == options.homotopy_steps ? 1e-13 : 1e-11);
    require(ok, Errc::no_convergence, "Newton failed along the homotopy");
  }
  return finish(LogSystem::to_z(w), quantum_numbers, length, rates, options.tolerance);
}

BetheRoots bethe_refine(const std::vector<cplx>& start, long length, const Rates& rates, const BetheOptions& options) {
  const int n = static_cast<int>(start.size());
  require(n >= 1, Errc::invalid_argument, "need at least one root");
  // recover quantum numbers from the start point so the log form is consistent
  std::vector<cplx> z = start;
  LogSystem probe(length, rates, std::vector<int>(static_cast<std::size_t>(n), 0));
  probe.init_logs(z);
  Eigen::VectorXcd w(n);
  for (int j = 0; j < n; ++j) w[j] = std::log(z[static_cast<std::size_t>(j)]);
  Eigen::VectorXcd f = probe.residual(w, 1.0);
  std::vector<int> k(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) k[static_cast<std::size_t>(j)] = static_cast<int>(std::lround(f[j].imag() / (2.0 * kPi)));
  LogSystem sys(length, rates, k);
  sys.init_logs(z);
  require(sys.newton(w, 1.0, options.newton_iterations, 1e-13), Errc::no_convergence, "Newton refinement failed");
  return finish(LogSystem::to_z(w), k, length, rates, options.tolerance);
}

BetheEigenpair bethe_eigenpair(const BetheRoots& roots) {
  const int n = static_cast<int>(roots.z.size());
  GeneratorMatrix g = generator(n, roots.length, roots.rates);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::pair<std::vector<int>, cplx>> amps;
  do amps.emplace_back(sigma, amplitude(sigma, roots.z, roots.rates));
  while (std::next_permutation(sigma.begin(), sigma.end()));

  auto u = [&](const State& x) {
    cplx total = 0.0;
    for (const auto& [perm, a] : amps) {
      cplx term = a;
      for (int j = 0; j < n; ++j)
        term *= std::pow(roots.z[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])],
                         static_cast<int>(x[static_cast<std::size_t>(j)]));
      total += term;
    }
    return total;
  };

  BetheEigenpair out;
  out.energy = roots.energy;
  out.vector.resize(static_cast<Eigen::Index>(g.size()));
  for (std::size_t s = 0; s < g.size(); ++s) out.vector[static_cast<Eigen::Index>(s)] = u(g.states[s]);
  double norm = out.vector.cwiseAbs().maxCoeff();
  require(norm > 1e-10, Errc::null_vector, "Bethe amplitudes cancel; eigenvector is null");
  Eigen::VectorXcd av = g.A.cast<cplx>() * out.vector;
  out.generator_residual = (av - out.energy * out.vector).cwiseAbs().maxCoeff() / norm;
  double periodic = 0.0;
  for (const auto& x : g.states) {
    State shifted(x.begin() + 1, x.end());
    shifted.push_back(x.front() + roots.length);
    periodic = std::max(periodic, std::abs(u(shifted) - u(x)));
  }
  out.periodic_residual = periodic / norm;
  return out;
}

BetheSpectrum bethe_spectrum(int n, long length, const Rates& rates, const BetheOptions& options) {
  BetheSpectrum out;
  GeneratorMatrix g = generator(n, length, rates);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(g.dense().cast<cplx>());
  std::vector<cplx> spectrum(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::vector<bool> used(spectrum.size(), false);

  std::vector<int> k;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(k.size()) == n) {
      ++out.attempted;
      try {
        BetheRoots roots = bethe_solve(n, length, rates, k, options);
        for (const auto& prev : out.accepted)
          if (same_root_set(prev.z, roots.z)) {
            ++out.duplicates;
            return;
          }
        BetheEigenpair pair = bethe_eigenpair(roots);
        double nearest = INFINITY;
        for (const auto& ev : spectrum) nearest = std::min(nearest, std::abs(ev - roots.energy));
        out.max_eigenvalue_mismatch = std::max(out.max_eigenvalue_mismatch, nearest);
        // claim one unused copy for the multiplicity count
        for (std::size_t e = 0; e < spectrum.size(); ++e)
          if (!used[e] && std::abs(spectrum[e] - roots.energy) < 1e-7) {
            used[e] = true;
            break;
          }
        out.accepted.push_back(std::move(roots));
        out.pairs.push_back(std::move(pair));
      } catch (const Error&) {
        ++out.failed;
      }
      return;
    }
    for (int q = start; q < length; ++q) {
      k.push_back(q);
      self(self, q + 1);
      k.pop_back();
    }
  };
  rec(rec, 0);
  out.coverage = static_cast<double>(std::count(used.begin(), used.end(), true)) / static_cast<double>(spectrum.size());
  return out;
}

}  // namespace kpz::exact
