#include "volvol/special.hpp"

#include <cmath>
#include <limits>

#include "volvol/error.hpp"
#include "volvol/quadrature.hpp"

namespace volvol::special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 5000;

// Taylor coefficients of 1/Gamma(z) about 0, z^2 .. z^27 (the z^1 coefficient is 1).
constexpr double kRgamma[] = {
    0.57721566490153286061,   -0.65587807152025388108,  -0.042002635034095235529,  0.1665386113822914895,
    -0.042197734555544336748, -0.0096219715278769735621, 0.0072189432466630995424,  -0.0011651675918590651121,
    -0.00021524167411495097282, 0.00012805028238811618615, -0.000020134854780788238656, -1.2504934821426706573e-6,
    1.1330272319816958824e-6, -2.0563384169776071035e-7, 6.1160951044814158179e-9,  5.0020076444692229301e-9,
    -1.1812745704870201446e-9, 1.0434267116911005105e-10, 7.782263439905071254e-12, -3.6968056186422057082e-12,
    5.100370287454475979e-13, -2.0583260535665067832e-14, -5.3481225394230179824e-15, 1.2267786282382607902e-15,
    -1.1812593016974587695e-16, 1.1866922547516003326e-18};

// ln Gamma(s, x) by the Legendre continued fraction (modified Lentz).
double log_upper_gamma_cf(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return -x + s * std::log(x) + std::log(h);
}

// ln Gamma(s, x) = ln Gamma(s) + ln(1 - P(s, x)) with P from the power series; s > 0.
double log_upper_gamma_series(double s, double x) {
  double ap = s, del = 1.0 / s, sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  const double p = sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
  return std::lgamma(s) + std::log1p(-p);
}

// Gamma(s, x) for |s| <= 0.5 and x <= 1.5:
//   Gamma(s, x) = (Gamma(1+s) - x^s)/s - x^s sum_{n>=1} (-x)^n / (n! (s+n)).
double upper_gamma_small_s(double s, double x) {
  const double lx = std::log(x);
  const double z = s * lx;
  const double expm1_over_z = z == 0.0 ? 1.0 : std::expm1(z) / z;
  const double head = gamma1pm1_over_s(s) - lx * expm1_over_z;
  double term = 1.0, tail = 0.0;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= -x / n;
    const double add = term / (s + n);
    tail += add;
    if (std::abs(add) < kEps * std::abs(tail)) break;
  }
  return head - std::exp(z) * tail;
}

}  // namespace

double gamma1pm1_over_s(double s) {
  // With 1/Gamma(1+s) = 1 + r(s) and r(s)/s = sum_k c_k s^(k-2):
  // (Gamma(1+s) - 1)/s = -(r/s) / (1 + r).
  double r_over_s = 0.0;
  for (int k = static_cast<int>(std::size(kRgamma)) - 1; k >= 0; --k) r_over_s = r_over_s * s + kRgamma[k];
  return -r_over_s / (1.0 + s * r_over_s);
}

double log_upper_gamma(double s, double x) {
  if (std::isnan(s) || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.0) throw AnalysisError("upper incomplete gamma requires x >= 0");
  if (x == 0.0) return s > 0.0 ? std::lgamma(s) : std::numeric_limits<double>::infinity();
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();

  if (x > std::max(1.0, s + 1.0)) return log_upper_gamma_cf(s, x);
  if (s > 0.5) return log_upper_gamma_series(s, x);
  if (s >= -0.5) return std::log(upper_gamma_small_s(s, x));

  // s < -0.5 and x <= 1: recur downward from s0 in (-0.5, 0.5] using the
  // scaled value G_k = Gamma(s_k, x) / (x^s_k e^-x), for which
  // Gamma(s-1, x) = (Gamma(s, x) - x^(s-1) e^-x) / (s-1) becomes G_k = (x G_{k-1} - 1) / s_k.
  const int m = static_cast<int>(std::ceil(-s - 0.5));
  const double s0 = s + m;
  const double lx = std::log(x);
  double scaled = upper_gamma_small_s(s0, x) * std::exp(x - s0 * lx);
  for (int k = 1; k <= m; ++k) scaled = (x * scaled - 1.0) / (s0 - k);
  return std::log(scaled) + s * lx - x;
}

double upper_gamma_quadrature(double s, double x, double rel_tol) {
  if (!(x > 0.0)) throw AnalysisError("quadrature reference requires x > 0");
  // Gamma(s, x) = integral over y in [ln x, inf) of exp(s y - e^y). The
  // exponent is concave; shift by its maximum on the domain to stay in range.
  const double y0 = std::log(x);
  const double y_peak = s > 0.0 ? std::max(y0, std::log(s)) : y0;
  const double shift = s * y_peak - std::exp(y_peak);
  // Upper end where the integrand has fallen below e^-60 of its peak.
  double y1 = std::max(y_peak, 0.0) + 1.0;
  while (s * y1 - std::exp(y1) - shift > -60.0) y1 += 0.5;
  auto integrand = [&](double y) { return std::exp(s * y - std::exp(y) - shift); };
  // Split at the peak and at unit steps so the adaptive rule sees smooth panels.
  double total = 0.0;
  double lo = y0;
  while (lo < y1) {
    const double hi = std::min(y1, lo + 1.0);
    total += quadrature::gauss_kronrod(integrand, lo, hi, rel_tol * 1e-2).value;
    lo = hi;
  }
  return total * std::exp(shift);
}

}  // namespace volvol::special
