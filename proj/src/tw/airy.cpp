#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kpzlab/error.hpp"
#include "kpzlab/tracy_widom.hpp"

namespace kpz::tw {

namespace {

using quad = boost::multiprecision::cpp_bin_float_quad;

constexpr double kPi = 3.14159265358979323846;

AiryEval maclaurin(double s_in) {
  const quad s = s_in;
  const quad s3 = s * s * s;
  // Ai(0) = 3^{-2/3} / Gamma(2/3), -Ai'(0) = 3^{-1/3} / Gamma(1/3)
  const quad c1 = pow(quad(3), quad(-2) / 3) / boost::multiprecision::tgamma(quad(2) / 3);
  const quad c2 = pow(quad(3), quad(-1) / 3) / boost::multiprecision::tgamma(quad(1) / 3);
  // f = sum a_k s^{3k}, g = sum b_k s^{3k+1}
  quad f = 0, fp = 0, g = 0, gp = 0;
  quad a = 1, b = 1;   // coefficients
  quad pw = 1;         // s^{3k}
  const quad eps = quad(1e-36);
  for (int k = 0; k < 400; ++k) {
    quad tf = a * pw;
    quad tg = b * pw * s;
    f += tf;
    g += tg;
    if (k > 0) fp += 3 * k * a * pw / s;
    gp += (3 * k + 1) * b * pw;
    if (k > 2 && abs(tf) < eps * (abs(f) + 1) && abs(tg) < eps * (abs(g) + 1)) break;
    a /= quad((3 * k + 2) * (3 * k + 3));
    b /= quad((3 * k + 3) * (3 * k + 4));
    pw *= s3;
  }
  quad ai = c1 * f - c2 * g;
  quad aip = c1 * fp - c2 * gp;
  return {s_in, static_cast<double>(ai), static_cast<double>(aip)};
}

AiryEval asymptotic(double s) {
  const double zeta = 2.0 / 3.0 * std::pow(s, 1.5);
  double su = 1.0, sv = 1.0;
  double u = 1.0, last = 1.0;
  for (int k = 1; k < 200; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    double zk = std::pow(zeta, k);
    double term = u / zk;
    if (term >= last) break;  // smallest term reached
    last = term;
    double sign = (k % 2) ? -1.0 : 1.0;
    su += sign * term;
    sv += sign * v / zk;
  }
  double pref = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
  return {s, pref / std::pow(s, 0.25) * su, -pref * std::pow(s, 0.25) * sv};
}

}  // namespace

AiryEval airy(double s) {
  require(s >= -12.0 && s <= 12.0, Errc::out_of_range, "Airy evaluation limited to [-12, 12]");
  if (s == 0.0) return maclaurin(0.0);
  return s <= 5.0 ? maclaurin(s) : asymptotic(s);
}

}  // namespace kpz::tw
