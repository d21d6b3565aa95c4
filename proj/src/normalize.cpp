#include "volvol/normalize.hpp"

#include <algorithm>
#include <cmath>

#include "volvol/error.hpp"
#include "volvol/parallel.hpp"
#include "volvol/stats.hpp"

namespace volvol {

std::vector<double> log_returns(const StockSeries& series) {
  if (series.bars.size() < 2) throw DataError(series.ticker + ": insufficient data for returns");
  std::vector<double> r(series.bars.size() - 1);
  for (std::size_t t = 1; t < series.bars.size(); ++t) {
    const double p0 = series.bars[t - 1].close, p1 = series.bars[t].close;
    if (!(p0 > 0.0) || !(p1 > 0.0)) throw DataError(series.ticker + ": invalid price");
    r[t - 1] = std::log(p1) - std::log(p0);
  }
  return r;
}

std::pair<std::vector<double>, DetrendFit> detrend_log_volume(const StockSeries& series) {
  const std::size_t n = series.bars.size();
  if (n < 2) throw DataError(series.ticker + ": degenerate detrend fit (fewer than 2 bars)");
  std::vector<double> t(n), lq(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (series.bars[i].volume == 0) throw DataError(series.ticker + ": zero volume cannot be log-transformed");
    t[i] = static_cast<double>(i);
    lq[i] = std::log(static_cast<double>(series.bars[i].volume));
  }
  const auto fit = stats::simple_ols(t, lq);
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = lq[i] - (fit.intercept + fit.slope * t[i]);
  return {std::move(resid), DetrendFit{fit.intercept, fit.slope, n}};
}

NormalizedSeries normalize_series(const StockSeries& series) {
  const auto returns = log_returns(series);
  auto [resid, fit] = detrend_log_volume(series);
  // Drop the first bar's volume so v(t) pairs with the return ending on day t.
  std::vector<double> qt(resid.begin() + 1, resid.end());

  NormalizedSeries out;
  out.ticker = series.ticker;
  out.detrend = fit;
  out.stats.mean_return = stats::mean(returns);
  out.stats.std_return = stats::population_std(returns);
  out.stats.mean_logvol = stats::mean(qt);
  out.stats.std_logvol = stats::population_std(qt);
  // Rounding can leave a tiny spread on mathematically constant input.
  auto degenerate = [](double sd, double m) { return !(sd > 1e-13 * std::max(1.0, std::abs(m))); };
  if (degenerate(out.stats.std_return, out.stats.mean_return)) throw AnalysisError(series.ticker + ": degenerate series (constant returns)");
  if (degenerate(out.stats.std_logvol, out.stats.mean_logvol)) throw AnalysisError(series.ticker + ": degenerate series (constant volume)");

  const std::size_t n = returns.size();
  out.dates.resize(n);
  out.g.resize(n);
  out.v.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.dates[t] = series.bars[t + 1].date;
    out.g[t] = std::abs((returns[t] - out.stats.mean_return) / out.stats.std_return);
    out.v[t] = (qt[t] - out.stats.mean_logvol) / out.stats.std_logvol;
  }
  return out;
}

std::vector<NormalizedSeries> normalize_universe(const std::vector<StockSeries>& universe) {
  std::vector<NormalizedSeries> out(universe.size());
  parallel_for(universe.size(), [&](std::size_t i) { out[i] = normalize_series(universe[i]); });
  return out;
}

}  // namespace volvol
