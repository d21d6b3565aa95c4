#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "volvol/binning.hpp"
#include "volvol/date.hpp"
#include "volvol/distributions.hpp"
#include "volvol/normalize.hpp"

namespace volvol {

/// Local maximum volatility: per volume bin, the largest g(t) among days whose
/// volume v(t - lag) falls in the bin.
struct LmvCurve {
  std::size_t lag = 0;
  Binning bins;
  std::vector<double> bin_centers;
  std::vector<double> lmv;              // meaningful only where occupied
  std::vector<std::optional<Date>> lmv_dates;
  std::vector<bool> occupied;

  std::size_t occupied_count() const;
};

/// The (v(t - lag), g(t)) pairs for t = lag .. n-1.
std::vector<GvPair> lagged_pairs(const NormalizedSeries& series, std::size_t lag);

LmvCurve compute_lmv(const NormalizedSeries& series, const Binning& bins, std::size_t lag);

struct CorrelationReport {
  double rho_raw = 0.0;
  double rho_lmv = 0.0;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_bins = 0;
};

CorrelationReport lmv_correlation(const LmvCurve& curve, const std::vector<GvPair>& pairs);

struct LagProfileRow {
  std::size_t lag = 0;
  double mean_rho_raw = 0.0;
  double std_rho_raw = 0.0;
  double mean_rho_lmv = 0.0;
  double std_rho_lmv = 0.0;
  std::size_t n_tickers = 0;
  std::vector<std::string> excluded;  // "TICKER: reason"
};

struct LagProfile {
  std::vector<LagProfileRow> rows;
  // per_ticker[lag][ticker index], empty optional when the ticker was excluded
  std::vector<std::vector<std::optional<CorrelationReport>>> per_ticker;
};

/// Per-ticker correlations for lag = 0..max_lag, averaged across tickers
/// (population standard deviation).
LagProfile lag_correlation_profile(const std::vector<NormalizedSeries>& universe, std::size_t max_lag,
                                   const Binning& bins);

}  // namespace volvol
