#include "volvol/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "volvol/error.hpp"
#include "volvol/stats.hpp"

namespace volvol {

const char* to_string(Side s) { return s == Side::top ? "top" : "bottom"; }
const char* to_string(Conditioner c) { return c == Conditioner::volume ? "volume" : "volatility"; }

ExtremeDaySet extreme_day_set(std::span<const double> g, double fraction, Side side) {
  if (!(fraction > 0.0 && fraction <= 0.5)) throw ConfigError("extreme fraction must lie in (0, 0.5]");
  const std::size_t n = g.size();
  if (static_cast<double>(n) * fraction < 1.0 - 1e-12)
    throw AnalysisError("insufficient data for fraction: " + std::to_string(n) + " days");
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (side == Side::top)
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
  else
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });

  ExtremeDaySet set;
  set.side = side;
  set.fraction = fraction;
  set.members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  set.threshold = g[order[k - 1]];
  std::sort(set.members.begin(), set.members.end());
  return set;
}

QuintileAssignment quintile_assign(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 5) throw AnalysisError("quintile assignment needs at least 5 values");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  QuintileAssignment q;
  q.labels.assign(n, 0);
  const std::size_t base = n / 5, extra = n % 5;
  std::size_t pos = 0;
  for (int label = 1; label <= 5; ++label) {
    const std::size_t size = base + (static_cast<std::size_t>(label) <= extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) q.labels[order[pos + i]] = label;
    pos += size;
    if (label < 5) q.boundaries[label - 1] = values[order[pos - 1]];
  }
  return q;
}

namespace {

// Day t is eligible when t + 1 exists; it is an event when t + 1 is extreme.
std::vector<char> preceding_events(const ExtremeDaySet& set, std::size_t n) {
  std::vector<char> events(n - 1, 0);
  for (std::size_t m : set.members)
    if (m >= 1) events[m - 1] = 1;
  return events;
}

}  // namespace

QuintileVector preceding_quintile_distribution(const std::vector<NormalizedSeries>& universe,
                                               Conditioner conditioner, Side side, double fraction) {
  if (universe.empty()) throw AnalysisError("empty universe");
  QuintileVector out;
  out.conditioner = conditioner;
  out.side = side;
  for (const auto& s : universe) {
    try {
      if (s.size() < 6) throw AnalysisError("series too short");
      const auto set = extreme_day_set(s.g, fraction, side);
      const auto events = preceding_events(set, s.size());
      const auto& x = conditioner == Conditioner::volume ? s.v : s.g;
      const auto q = quintile_assign(std::span<const double>(x).first(s.size() - 1));
      std::array<double, 5> counts{};
      double total = 0.0;
      for (std::size_t t = 0; t + 1 < s.size(); ++t) {
        if (!events[t]) continue;
        counts[q.labels[t] - 1] += 1.0;
        total += 1.0;
      }
      if (total == 0.0) throw AnalysisError("no extreme day has a predecessor");
      for (auto& c : counts) c /= total;
      out.per_ticker.push_back(counts);
      out.tickers.push_back(s.ticker);
    } catch (const Error& e) {
      out.excluded.push_back(s.ticker + ": " + e.what());
    }
  }
  if (out.per_ticker.empty()) throw AnalysisError("every ticker was excluded from the quintile analysis");
  for (std::size_t k = 0; k < 5; ++k) {
    std::vector<double> col;
    for (const auto& row : out.per_ticker) col.push_back(row[k]);
    out.mean[k] = stats::mean(col);
    out.std[k] = stats::population_std(col);
  }
  return out;
}

QuintileGrid joint_quintile_grid(const std::vector<NormalizedSeries>& universe, Side side, double fraction,
                                 QuintileMode mode) {
  if (universe.empty()) throw AnalysisError("empty universe");
  QuintileGrid grid;
  grid.side = side;

  struct Prepared {
    std::vector<char> events;
    std::vector<int> v_label, g_label;
  };
  std::vector<Prepared> prepared;
  for (const auto& s : universe) {
    try {
      if (s.size() < 6) throw AnalysisError("series too short");
      const auto set = extreme_day_set(s.g, fraction, side);
      Prepared p;
      p.events = preceding_events(set, s.size());
      if (mode == QuintileMode::per_stock) {
        p.v_label = quintile_assign(std::span<const double>(s.v).first(s.size() - 1)).labels;
        p.g_label = quintile_assign(std::span<const double>(s.g).first(s.size() - 1)).labels;
      } else {
        p.v_label.assign(s.size() - 1, 0);
        p.g_label.assign(s.size() - 1, 0);
      }
      prepared.push_back(std::move(p));
    } catch (const Error& e) {
      grid.excluded.push_back(s.ticker + ": " + e.what());
      prepared.emplace_back();
    }
  }

  if (mode == QuintileMode::pooled) {
    std::vector<double> v_all, g_all;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (prepared[i].events.empty()) continue;
      const auto& s = universe[i];
      v_all.insert(v_all.end(), s.v.begin(), s.v.end() - 1);
      g_all.insert(g_all.end(), s.g.begin(), s.g.end() - 1);
    }
    if (v_all.size() < 5) throw AnalysisError("every ticker was excluded from the joint grid");
    const auto vq = quintile_assign(v_all).labels;
    const auto gq = quintile_assign(g_all).labels;
    std::size_t offset = 0;
    for (auto& p : prepared) {
      if (p.events.empty()) continue;
      std::copy_n(vq.begin() + static_cast<std::ptrdiff_t>(offset), p.v_label.size(), p.v_label.begin());
      std::copy_n(gq.begin() + static_cast<std::ptrdiff_t>(offset), p.g_label.size(), p.g_label.begin());
      offset += p.v_label.size();
    }
  }

  for (const auto& p : prepared) {
    for (std::size_t t = 0; t < p.events.size(); ++t) {
      const int iv = p.v_label[t] - 1, ig = p.g_label[t] - 1;
      ++grid.cell_counts[iv][ig];
      ++grid.total_eligible;
      if (p.events[t]) {
        ++grid.event_counts[iv][ig];
        ++grid.total_events;
      }
    }
  }
  if (grid.total_events < 100)
    throw AnalysisError("insufficient extreme days for the joint grid: " + std::to_string(grid.total_events) +
                        " pooled, need 100");
  grid.unconditioned = static_cast<double>(grid.total_events) / static_cast<double>(grid.total_eligible);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (grid.cell_counts[i][j] > 0)
        grid.cells[i][j] = static_cast<double>(grid.event_counts[i][j]) /
                           static_cast<double>(grid.cell_counts[i][j]) / grid.unconditioned;
  return grid;
}

R2Uplift regression_r2_uplift(const std::vector<NormalizedSeries>& universe) {
  R2Uplift out;
  for (const auto& s : universe) {
    try {
      if (s.size() < 30) throw AnalysisError("series shorter than 30 days");
      const std::size_t m = s.size() - 1;
      const std::span<const double> g(s.g), v(s.v);
      const auto r2 = stats::nested_r2(g.subspan(1, m), g.first(m), v.first(m));
      if (!(r2.x1_only > 0.0)) throw AnalysisError("baseline R^2 is zero; relative uplift undefined");
      out.rows.push_back({s.ticker, r2.x1_only, r2.with_both, (r2.with_both - r2.x1_only) / r2.x1_only});
    } catch (const Error& e) {
      out.excluded.push_back(s.ticker + ": " + e.what());
    }
  }
  if (out.rows.empty()) throw AnalysisError("every ticker was excluded from the regression");
  for (const auto& r : out.rows) {
    out.mean_uplift += r.uplift;
    out.mean_abs_uplift += r.r2_g_and_v - r.r2_g_only;
  }
  out.mean_uplift /= static_cast<double>(out.rows.size());
  out.mean_abs_uplift /= static_cast<double>(out.rows.size());
  return out;
}

}  // namespace volvol
