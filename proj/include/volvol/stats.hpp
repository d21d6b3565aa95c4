#pragma once

#include <functional>
#include <span>
#include <vector>

namespace volvol::stats {

double mean(std::span<const double> x);
/// Population standard deviation (divides by N).
double population_std(std::span<const double> x);

/// Pearson correlation. Throws AnalysisError when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit simple_ols(std::span<const double> x, std::span<const double> y);

/// Coefficient of determination of an OLS fit of y on [1, x1] and on
/// [1, x1, x2]. The second model nests the first, so `with_both >= x1_only`
/// holds exactly: it is accumulated as x1_only plus a nonnegative partial term.
struct NestedR2 {
  double x1_only = 0.0;
  double with_both = 0.0;
};
NestedR2 nested_r2(std::span<const double> y, std::span<const double> x1, std::span<const double> x2);

double normal_cdf(double x);
double normal_pdf(double x);
/// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double p);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Inputs need not be sorted.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Same, for inputs already sorted ascending.
double ks_two_sample_sorted(std::span<const double> a, std::span<const double> b);

/// One-sample Kolmogorov-Smirnov statistic of `samples` against a continuous CDF.
double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);

}  // namespace volvol::stats
