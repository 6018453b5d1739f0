#pragma once

// Topological recursion on the curve y^2 + z y + 1 = 0 in exact rational
// arithmetic.
//
// Chart: t = (y - 1) / (y + 1), so z(t) = 2 (1 + t^2) / (t^2 - 1),
// y(t) = (1 + t) / (1 - t), dz/dt = -8 t / (t^2 - 1)^2 with zeros at t = 0 and
// t = inf. Base data W_{0,1} = y dz and W_{0,2} = dt1 dt2 / (t1 - t2)^2. Every
// stable W_{g,k} is a Laurent polynomial in t_1..t_k times dt_1...dt_k.
// Expansions are taken at z = inf on the sheet t -> -1, where y ~ -1/z.

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kpz::toprec {

using Rational = mpq_class;
using cplx = std::complex<double>;

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
struct Polynomial {
  std::vector<Rational> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(const Rational& a);
  static Polynomial monomial(const Rational& a, int degree);

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  Rational operator()(const Rational& t) const;
  cplx operator()(cplx t) const;
  /// p(-t)
  Polynomial reflected() const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
/// Quotient and remainder over Q.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
Polynomial gcd(Polynomial a, Polynomial b);

/// num / den in lowest terms with a monic denominator.
class RationalFn {
 public:
  RationalFn() : num_(), den_(Polynomial::constant(1)) {}
  RationalFn(Polynomial num, Polynomial den);
  static RationalFn constant(const Rational& a) { return {Polynomial::constant(a), Polynomial::constant(1)}; }
  static RationalFn variable() { return {Polynomial::monomial(1, 1), Polynomial::constant(1)}; }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  Rational operator()(const Rational& t) const;
  cplx operator()(cplx t) const;
  RationalFn reflected() const { return {num_.reflected(), den_.reflected()}; }
  /// Coefficients of the Laurent expansion at t = 0: pairs (power, coeff) for
  /// powers up to max_power.
  std::map<int, Rational> laurent_at_zero(int max_power) const;

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
  friend bool operator==(const RationalFn& a, const RationalFn& b) { return a.num_.c == b.num_.c && a.den_.c == b.den_.c; }

 private:
  Polynomial num_, den_;
};

enum class Point { zero, infinity };

/// Residue of f(t) dt at t = 0 or t = inf (the latter is the residue of
/// -f(1/u)/u^2 at u = 0). Throws essential_singularity if the pole order
/// exceeds max_order.
Rational residue(const RationalFn& f, Point a, int max_order = 4096);

struct CurveChart {
  RationalFn z;   // z(t)
  RationalFn y;   // y(t)
  RationalFn dz;  // dz/dt
  /// y^2 + z y + 1 as a rational function (identically zero for this chart).
  RationalFn curve_defect() const;
};

CurveChart chart();

/// -(1/64) (1/(t + t1) + 1/(t - t1)) (t^2 - 1)^3 / t^2 as a function of t for a
/// fixed rational t1.
RationalFn kernel(const Rational& t1);

/// Sparse multivariate Laurent polynomial: exponent vector -> coefficient.
using Laurent = std::map<std::vector<int>, Rational>;

/// W_{g,k}. Stable cases hold `poly` (the coefficient of dt_1...dt_k); the
/// base cases are flagged and evaluated from their closed forms.
struct MultiDiff {
  int g = 0;
  int k = 0;
  Laurent poly;

  bool is_base() const { return (g == 0 && (k == 1 || k == 2)); }
  /// Coefficient function of dt_1...dt_k at the given point.
  Rational evaluate(const std::vector<Rational>& t) const;
  cplx evaluate(const std::vector<cplx>& t) const;
  /// Highest / lowest exponent of t_i in poly.
  std::pair<int, int> degree_range(int variable) const;
};

/// (W_{0,1}, W_{0,2}) with the closed forms y(t) z'(t) and 1/(t1 - t2)^2.
std::pair<MultiDiff, MultiDiff> base_cases();

struct RecursionStats {
  int g = 0;
  int k = 0;
  std::size_t integrand_terms = 0;
  double max_residue_check = 0.0;  // numeric contour vs exact residues
};

class Recursion {
 public:
  /// check_residues: verify each integrand's residues at 0 and inf against
  /// numeric contour integrals at a random point (slow, diagnostic).
  explicit Recursion(bool check_residues = false);

  /// W_{g,k}; computes missing dependencies in order of 2g - 2 + k.
  /// Requested cases are limited to g <= 2, k <= 3.
  const MultiDiff& get(int g, int k);
  bool has(int g, int k) const { return cache_.count({g, k}) != 0; }
  const std::vector<RecursionStats>& stats() const { return stats_; }

 private:
  friend MultiDiff recursion_step(int g, int k, Recursion& cache);
  const MultiDiff& ensure(int g, int k);

  std::map<std::pair<int, int>, MultiDiff> cache_;
  std::vector<RecursionStats> stats_;
  bool check_residues_;
};

/// One recursion step from already cached lower terms. Throws cache_miss when
/// a dependency is absent and invalid_argument for the base cases.
MultiDiff recursion_step(int g, int k, Recursion& cache);

enum class Sheet { physical, reflected };

/// Coefficients are normalised per expanded variable as
///   W = (-1)^k sum_m c_m prod_i z_i^{-m_i-1} dz_i,
/// so c are moments: W_{0,1} gives (1, 0, 1, 0, 2, ...), and c for W_{g,k} is
/// the genus-g part of the connected correlator of Tr M^{m_1}, ..., Tr M^{m_k}.
///
/// c_m for the expanded variable, m = 0..order, each a
/// Laurent polynomial in the remaining t variables (index order preserved,
/// the expanded variable dropped). Throws chart_singularity if W is singular
/// at z = inf on the requested sheet.
std::vector<Laurent> expansion_coeffs(const MultiDiff& w, int variable, int order, Sheet sheet = Sheet::physical);

/// c_{m_1..m_k} for all m_i <= order.
std::map<std::vector<int>, Rational> expansion_all(const MultiDiff& w, int order);

/// Scalar list for k = 1.
std::vector<Rational> expansion_coeffs(const MultiDiff& w, int order, Sheet sheet = Sheet::physical);

/// Catalan numbers C_0..C_count-1 by the convolution recurrence.
std::vector<Rational> catalan(int count);

/// JSON text {"g":..,"k":..,"terms":[{"exponents":[..],"coeff":"p/q"},..]}.
std::string to_json(const MultiDiff& w);

}  // namespace kpz::toprec
