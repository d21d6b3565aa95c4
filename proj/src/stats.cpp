#include "volvol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "volvol/error.hpp"

namespace volvol::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw AnalysisError("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_std(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

namespace {

struct Moments {
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
};

Moments centered_moments(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw AnalysisError("paired samples differ in length");
  if (x.size() < 2) throw AnalysisError("at least two paired samples required");
  Moments m;
  m.mx = mean(x);
  m.my = mean(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mx, dy = y[i] - m.my;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  const Moments m = centered_moments(x, y);
  if (!(m.sxx > 0.0) || !(m.syy > 0.0)) throw AnalysisError("correlation undefined: zero variance");
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

LinearFit simple_ols(std::span<const double> x, std::span<const double> y) {
  const Moments m = centered_moments(x, y);
  if (!(m.sxx > 0.0)) throw AnalysisError("singular design: regressor has zero variance");
  LinearFit fit;
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.my - fit.slope * m.mx;
  return fit;
}

NestedR2 nested_r2(std::span<const double> y, std::span<const double> x1, std::span<const double> x2) {
  if (y.size() != x1.size() || y.size() != x2.size()) throw AnalysisError("regression inputs differ in length");
  if (y.size() < 4) throw AnalysisError("regression needs at least four observations");
  const Moments m1 = centered_moments(x1, y);
  const Moments m2 = centered_moments(x1, x2);
  if (!(m1.sxx > 0.0)) throw AnalysisError("singular design: regressor has zero variance");
  if (!(m1.syy > 0.0)) throw AnalysisError("singular design: response has zero variance");

  // Residualise y and x2 on [1, x1].
  const double by = m1.sxy / m1.sxx;
  const double b2 = m2.sxy / m2.sxx;
  double eyy = 0.0, e22 = 0.0, ey2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = x1[i] - m1.mx;
    const double ey = (y[i] - m1.my) - by * dx;
    const double e2 = (x2[i] - m2.my) - b2 * dx;
    eyy += ey * ey;
    e22 += e2 * e2;
    ey2 += ey * e2;
  }
  if (!(e22 > 1e-12 * m2.syy) || !(m2.syy > 0.0))
    throw AnalysisError("singular design: second regressor is constant or collinear");

  NestedR2 r;
  r.x1_only = std::clamp(1.0 - eyy / m1.syy, 0.0, 1.0);
  const double partial = eyy > 0.0 ? std::min(1.0, (ey2 * ey2) / (eyy * e22)) : 0.0;
  r.with_both = r.x1_only + (1.0 - r.x1_only) * partial;
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw AnalysisError("normal quantile requires 0 < p < 1");
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Refine on whichever tail keeps the residual well conditioned.
  const double e = x < 0.0 ? normal_cdf(x) - p : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double ks_two_sample_sorted(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw AnalysisError("KS statistic needs two non-empty samples");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return ks_two_sample_sorted(sa, sb);
}

double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw AnalysisError("KS statistic needs a non-empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace volvol::stats
