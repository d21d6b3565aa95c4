#pragma once

#include <string>
#include <utility>
#include <vector>

#include "volvol/date.hpp"
#include "volvol/ingest.hpp"

namespace volvol {

struct DetrendFit {
  double intercept = 0.0;
  double slope = 0.0;  // per retained row
  std::size_t n = 0;
};

struct NormalizationStats {
  double mean_return = 0.0;
  double std_return = 1.0;
  double mean_logvol = 0.0;
  double std_logvol = 1.0;
};

/// Same-day aligned normalized volatility g(t) and normalized log-volume v(t).
struct NormalizedSeries {
  std::string ticker;
  std::vector<Date> dates;
  std::vector<double> g;
  std::vector<double> v;
  NormalizationStats stats;
  DetrendFit detrend;
  bool synthetic = false;

  std::size_t size() const { return g.size(); }
};

/// ln p(t) - ln p(t-1) over consecutive bars.
std::vector<double> log_returns(const StockSeries& series);

/// Residuals of ln Q(t) after an OLS fit against the row index t = 0..n-1.
std::pair<std::vector<double>, DetrendFit> detrend_log_volume(const StockSeries& series);

/// g(t) = |(R - <R>) / sigma_R|, v(t) = (Q~ - <Q~>) / sigma_Q~ with population
/// standard deviations. The first bar has no return, so its volume is dropped
/// and both sequences are aligned on the return dates.
NormalizedSeries normalize_series(const StockSeries& series);

std::vector<NormalizedSeries> normalize_universe(const std::vector<StockSeries>& universe);

}  // namespace volvol
