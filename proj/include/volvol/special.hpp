#pragma once

namespace volvol::special {

/// ln Gamma(s, x), the upper incomplete gamma function, for any real s and x > 0.
///
/// Series and continued-fraction evaluation:
///  - x above max(1, s + 1): Legendre continued fraction (valid for every s);
///  - s > 0.5: Gamma(s) minus the lower-gamma power series;
///  - |s| <= 0.5: regularised series with the 1/Gamma(1+s) Taylor expansion so
///    that s -> 0 does not cancel;
///  - s < -0.5: the |s| <= 0.5 value recurred downward.
/// Returns +inf if the value overflows a double.
double log_upper_gamma(double s, double x);

/// Gamma(s, x) = integral over [x, inf) of t^(s-1) e^(-t) dt by adaptive
/// Gauss-Kronrod quadrature in the variable y = ln t, relative tolerance
/// `rel_tol`. Slow; kept as an independent reference evaluation.
double upper_gamma_quadrature(double s, double x, double rel_tol = 1e-10);

/// (Gamma(1 + s) - 1) / s, accurate for |s| <= 0.5 including s = 0.
double gamma1pm1_over_s(double s);

}  // namespace volvol::special
