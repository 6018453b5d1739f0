#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"

namespace kpz::exact {

namespace {

double binomial(long n, long k) {
  double r = 1.0;
  for (long i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

void enumerate(long first, long count, int n, std::vector<State>& out) {
  State cur;
  auto rec = [&](auto&& self, long start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    long need = n - static_cast<long>(cur.size());
    for (long s = start; s + need <= first + count; ++s) {
      cur.push_back(s);
      self(self, s + 1);
      cur.pop_back();
    }
  };
  rec(rec, first);
}

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

GeneratorMatrix assemble(int n, const asep::LatticeKind& lattice, const Rates& rates, long first, long count) {
  GeneratorMatrix g;
  g.n_particles = n;
  g.lattice = lattice;
  g.rates = rates;
  enumerate(first, count, n, g.states);
  for (std::size_t i = 0; i < g.states.size(); ++i) g.index.emplace(g.states[i], i);
  const bool ring = std::holds_alternative<asep::Ring>(lattice);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    const State& x = g.states[s];
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int dir : {-1, 1}) {
        double rate = dir < 0 ? rates.p : rates.q;
        if (rate == 0.0) continue;
        long to = x[i] + dir;
        if (ring) to = floor_mod(to, count);
        if (std::find(x.begin(), x.end(), to) != x.end()) continue;
        out += rate;
        if (!ring && (to < first || to >= first + count)) continue;  // killed
        State y = x;
        y[i] = to;
        std::sort(y.begin(), y.end());
        trip.emplace_back(static_cast<int>(s), static_cast<int>(g.index.at(y)), rate);
      }
    }
    trip.emplace_back(static_cast<int>(s), static_cast<int>(s), -out);
  }
  const auto dim = static_cast<Eigen::Index>(g.states.size());
  g.A.resize(dim, dim);
  g.A.setFromTriplets(trip.begin(), trip.end());
  g.A.makeCompressed();
  return g;
}

}  // namespace

std::size_t GeneratorMatrix::find(const State& x) const {
  State key = x;
  if (const auto* ring = std::get_if<asep::Ring>(&lattice))
    for (auto& k : key) k = floor_mod(k, ring->length);
  std::sort(key.begin(), key.end());
  auto it = index.find(key);
  require(it != index.end(), Errc::out_of_range, "configuration not in the state space");
  return it->second;
}

GeneratorMatrix generator(int n, long length, const Rates& rates) {
  require(n >= 1 && n < length, Errc::invalid_argument, "generator requires 1 <= N < L");
  require(length <= 14, Errc::state_space_too_large, "ring generator limited to L <= 14");
  return assemble(n, asep::Ring{length}, rates, 0, length);
}

GeneratorMatrix window_generator(int n, long lo, long hi, const Rates& rates) {
  require(n >= 1 && lo < hi && hi - lo >= n, Errc::invalid_argument, "window must hold N particles");
  require(binomial(hi - lo, n) <= 250000.0, Errc::state_space_too_large,
          "window state space exceeds 250000 configurations");
  return assemble(n, asep::InfiniteWindow{lo, hi}, rates, lo, hi - lo);
}

Eigen::VectorXd delta_distribution(const GeneratorMatrix& A, const State& x) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(A.size()));
  v[static_cast<Eigen::Index>(A.find(x))] = 1.0;
  return v;
}

Eigen::VectorXd master_evolve(const GeneratorMatrix& A, const Eigen::VectorXd& pi0, double t,
                              const EvolveOptions& options) {
  require(pi0.size() == static_cast<Eigen::Index>(A.size()), Errc::invalid_argument, "distribution size mismatch");
  require(t >= 0.0 && std::isfinite(t), Errc::invalid_argument, "t must be finite and nonnegative");
  require((pi0.array() >= 0.0).all() && std::abs(pi0.sum() - 1.0) < 1e-12, Errc::invalid_argument,
          "initial law must be a probability vector");
  if (t == 0.0) return pi0;
  const double lambda = static_cast<double>(A.n_particles);
  const double mu = lambda * t;
  Eigen::SparseMatrix<double, Eigen::RowMajor> At = A.A.transpose();
  Eigen::VectorXd v = pi0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(pi0.size());
  for (std::size_t k = 0;; ++k) {
    require(k < options.max_terms, Errc::no_convergence, "uniformization exceeded its term cap");
    double kd = static_cast<double>(k);
    double w = std::exp(-mu + kd * std::log(mu) - std::lgamma(kd + 1.0));
    acc += w * v;
    // P(Poisson(mu) > k)
    if (kd >= mu && boost::math::gamma_p(kd + 1.0, mu) < options.tail) break;
    v += (At * v) / lambda;
  }
  return acc;
}

}  // namespace kpz::exact
