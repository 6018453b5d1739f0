#include <algorithm>
#include <cmath>
#include <numeric>

#include "kpzlab/error.hpp"
#include "kpzlab/rmt.hpp"

namespace kpz::rmt {

namespace {

// Reduces a Hermitian matrix in place to tridiagonal form T = Q^* A Q.
void tridiagonalize(Eigen::MatrixXcd& a, Eigen::MatrixXcd* q) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Eigen::VectorXcd x = a.block(k + 1, k, m, 1);
    double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    cplx phase = std::abs(x[0]) > 0.0 ? x[0] / std::abs(x[0]) : cplx(1.0, 0.0);
    cplx alpha = -phase * xnorm;
    Eigen::VectorXcd v = x;
    v[0] -= alpha;
    double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H = I - 2 v v^*, applied on both sides of the trailing block
    auto block = a.block(k + 1, k + 1, m, m);
    Eigen::VectorXcd w = block * v;
    cplx kdot = v.dot(w);  // v^* w
    Eigen::VectorXcd u = w - kdot * v;
    block -= 2.0 * (v * u.adjoint() + u * v.adjoint());
    a.block(k + 1, k, m, 1).setZero();
    a(k + 1, k) = alpha;
    a.block(k, k + 1, 1, m).setZero();
    a(k, k + 1) = std::conj(alpha);
    if (q) {
      auto cols = q->block(0, k + 1, n, m);
      Eigen::VectorXcd cv = cols * v;
      cols -= 2.0 * cv * v.adjoint();
    }
  }
}

}  // namespace

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& m, bool want_vectors) {
  require(m.rows() == m.cols(), Errc::invalid_argument, "matrix must be square");
  const Eigen::Index n = m.rows();
  HermitianEigen out;
  if (n == 0) return out;
  Eigen::MatrixXcd a = m;
  Eigen::MatrixXcd q;
  if (want_vectors) q = Eigen::MatrixXcd::Identity(n, n);
  tridiagonalize(a, want_vectors ? &q : nullptr);

  std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n), 0.0);
  // make the off-diagonal real with a diagonal unitary
  Eigen::VectorXcd phase = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = a(i, i).real();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    cplx off = a(i + 1, i);
    double mag = std::abs(off);
    e[static_cast<std::size_t>(i)] = mag;
    phase[i + 1] = mag > 0.0 ? phase[i] * off / mag : phase[i];
  }
  Eigen::MatrixXd z;
  if (want_vectors) z = Eigen::MatrixXd::Identity(n, n);

  const double tol = 1e-12 * m.norm();
  const int cap = 50 * static_cast<int>(n);
  int sweeps = 0;
  // implicit QL with Wilkinson-type shift on (d, e); e[i] couples i and i+1
  for (Eigen::Index l = 0; l < n; ++l) {
    for (;;) {
      Eigen::Index mm = l;
      for (; mm + 1 < n; ++mm) {
        double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= tol || std::abs(e[mm]) <= 1e-16 * dd) break;
      }
      if (mm == l) break;
      require(++sweeps <= cap, Errc::no_convergence, "QL iteration cap reached");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      Eigen::Index i = mm - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        double f = s * e[i];
        double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mm] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
      }
      if (underflow && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0.0;
    }
  }
  out.iterations = sweeps;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });
  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (want_vectors) {
    Eigen::MatrixXcd basis = q * phase.asDiagonal();
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) out.vectors.col(k) = basis * z.col(order[k]).cast<cplx>();
  }
  return out;
}

SpectralSample eigenvalues(const Eigen::MatrixXcd& m) {
  HermitianEigen h = hermitian_eigen(m, false);
  return {static_cast<int>(m.rows()), std::vector<double>(h.values.data(), h.values.data() + h.values.size())};
}

SpectralSample eigenvalues(const GUEMatrix& m) { return eigenvalues(m.m); }

}  // namespace kpz::rmt
