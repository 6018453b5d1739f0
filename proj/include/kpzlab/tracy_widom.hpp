#pragma once

// Tracy-Widom GUE distribution from the Hastings-McLeod solution of
// Painleve II: q'' = s q + 2 q^3 with q(s) ~ Ai(s) as s -> +inf, and
// F2(s) = exp(-int_s^inf (x - s) q(x)^2 dx).

#include <string>
#include <vector>

namespace kpz::tw {

struct AiryEval {
  double s = 0.0;
  double ai = 0.0;
  double aip = 0.0;
};

/// Ai and Ai' on [-12, 12]: Maclaurin series in quad precision for s <= 5,
/// asymptotic expansion truncated at its smallest term above.
AiryEval airy(double s);

struct PainleveOptions {
  double s_min = -10.0;
  double s_max = 8.0;
  double step = 0.01;
  double tolerance = 1e-10;  // absolute and relative local error
  double perturbation = 0.0; // added to q(s_max); nonzero values probe the separatrix
  double blow_up = 1e6;
};

struct PainleveSolution {
  std::vector<double> s;   // ascending grid
  std::vector<double> q;
  std::vector<double> qp;
  std::vector<double> u;   // int_s^inf q^2
  std::vector<double> v;   // int_s^inf (x - s) q^2
  double step = 0.0;

  std::size_t size() const { return s.size(); }
  /// max |q'' - s q - 2 q^3| over interior points, q'' from a five-point stencil.
  double max_residual() const;
};

/// Integrates backward from s_max with Airy data, carrying the two tail
/// integrals along. Throws blow_up if |q| exceeds the bound.
PainleveSolution hastings_mcleod(const PainleveOptions& options = {});

/// F2 at s: cubic Hermite interpolation of v inside the grid, the analytic
/// Airy tail above it; grid_coverage below it.
double f2_cdf(const PainleveSolution& sol, double s);
double f2_pdf(const PainleveSolution& sol, double s);

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  double variance = 0.0;
  double mass = 0.0;  // int pdf over the grid
};

/// Composite Simpson quadrature of the pdf over the grid.
Moments f2_moments(const PainleveSolution& sol);

class TracyWidom {
 public:
  explicit TracyWidom(const PainleveOptions& options = {});

  /// F2(s); returns 0 below the grid (F2(s_min) < 1e-6) rather than failing.
  double cdf(double s) const;
  double pdf(double s) const;
  const Moments& moments() const { return moments_; }
  const PainleveSolution& solution() const { return sol_; }
  /// CSV columns s,q,F2,pdf on the solution grid.
  void write_table(const std::string& path) const;

 private:
  PainleveSolution sol_;
  Moments moments_;
};

/// Shared instance with default options, built on first use.
const TracyWidom& default_tracy_widom();

}  // namespace kpz::tw
