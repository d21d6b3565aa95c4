#include "volvol/lmv.hpp"

#include <cmath>

#include "volvol/error.hpp"
#include "volvol/parallel.hpp"
#include "volvol/stats.hpp"

namespace volvol {

std::size_t LmvCurve::occupied_count() const {
  std::size_t n = 0;
  for (bool b : occupied) n += b ? 1 : 0;
  return n;
}

std::vector<GvPair> lagged_pairs(const NormalizedSeries& series, std::size_t lag) {
  if (series.size() <= lag) throw AnalysisError(series.ticker + ": series shorter than lag");
  std::vector<GvPair> pairs;
  pairs.reserve(series.size() - lag);
  for (std::size_t t = lag; t < series.size(); ++t) pairs.push_back({series.g[t], series.v[t - lag]});
  return pairs;
}

LmvCurve compute_lmv(const NormalizedSeries& series, const Binning& bins, std::size_t lag) {
  if (series.size() <= lag) throw AnalysisError(series.ticker + ": series shorter than lag");
  LmvCurve curve{lag, bins, bins.centers(), std::vector<double>(bins.size(), 0.0),
                 std::vector<std::optional<Date>>(bins.size()), std::vector<bool>(bins.size(), false)};
  for (std::size_t t = lag; t < series.size(); ++t) {
    const auto j = bins.locate(series.v[t - lag]);
    if (!j) continue;
    // Strict > keeps the earliest date on ties.
    if (!curve.occupied[*j] || series.g[t] > curve.lmv[*j]) {
      curve.occupied[*j] = true;
      curve.lmv[*j] = series.g[t];
      curve.lmv_dates[*j] = t < series.dates.size() ? std::optional<Date>(series.dates[t]) : std::nullopt;
    }
  }
  if (curve.occupied_count() == 0) throw AnalysisError(series.ticker + ": no data in volume range");
  return curve;
}

CorrelationReport lmv_correlation(const LmvCurve& curve, const std::vector<GvPair>& pairs) {
  std::vector<double> centers, maxima;
  for (std::size_t j = 0; j < curve.lmv.size(); ++j) {
    if (!curve.occupied[j]) continue;
    centers.push_back(curve.bin_centers[j]);
    maxima.push_back(curve.lmv[j]);
  }
  if (centers.size() < 3) throw AnalysisError("insufficient LMV points: " + std::to_string(centers.size()) +
                                              " occupied bins, need 3");
  if (pairs.size() < 3) throw AnalysisError("insufficient pairs for correlation");
  std::vector<double> v(pairs.size()), g(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    v[i] = pairs[i].v;
    g[i] = pairs[i].g;
  }
  CorrelationReport r;
  r.rho_lmv = stats::pearson(centers, maxima);
  r.rho_raw = stats::pearson(v, g);
  const auto fit = stats::simple_ols(centers, maxima);
  r.fit_slope = fit.slope;
  r.fit_intercept = fit.intercept;
  r.n_pairs = pairs.size();
  r.n_bins = centers.size();
  return r;
}

LagProfile lag_correlation_profile(const std::vector<NormalizedSeries>& universe, std::size_t max_lag,
                                   const Binning& bins) {
  LagProfile profile;
  profile.per_ticker.assign(max_lag + 1, std::vector<std::optional<CorrelationReport>>(universe.size()));
  std::vector<std::vector<std::string>> reasons(max_lag + 1, std::vector<std::string>(universe.size()));

  parallel_for(universe.size(), [&](std::size_t i) {
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
      try {
        const auto curve = compute_lmv(universe[i], bins, lag);
        profile.per_ticker[lag][i] = lmv_correlation(curve, lagged_pairs(universe[i], lag));
      } catch (const Error& e) {
        reasons[lag][i] = e.what();
      }
    }
  });

  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    LagProfileRow row;
    row.lag = lag;
    std::vector<double> raw, lmv;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (const auto& r = profile.per_ticker[lag][i]) {
        raw.push_back(r->rho_raw);
        lmv.push_back(r->rho_lmv);
      } else {
        row.excluded.push_back(universe[i].ticker + ": " + reasons[lag][i]);
      }
    }
    row.n_tickers = raw.size();
    if (!raw.empty()) {
      row.mean_rho_raw = stats::mean(raw);
      row.std_rho_raw = stats::population_std(raw);
      row.mean_rho_lmv = stats::mean(lmv);
      row.std_rho_lmv = stats::population_std(lmv);
    } else {
      row.mean_rho_raw = row.std_rho_raw = row.mean_rho_lmv = row.std_rho_lmv = std::nan("");
    }
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace volvol
