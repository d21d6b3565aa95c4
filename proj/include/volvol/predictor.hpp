#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volvol/normalize.hpp"

namespace volvol {

enum class Side { top, bottom };
enum class Conditioner { volume, volatility };
enum class QuintileMode { per_stock, pooled };

const char* to_string(Side s);
const char* to_string(Conditioner c);

/// Indices of the round(fraction * n) largest (top) or smallest (bottom) g of
/// one series, ascending. Ties at the threshold go to the earlier day.
struct ExtremeDaySet {
  Side side = Side::top;
  double fraction = 0.01;
  std::vector<std::size_t> members;
  double threshold = 0.0;  // g of the last admitted member
};

ExtremeDaySet extreme_day_set(std::span<const double> g, double fraction, Side side);

struct QuintileAssignment {
  std::vector<int> labels;          // 1..5, aligned with the input
  std::array<double, 4> boundaries;  // largest value in quintiles 1..4
};

/// Rank-based quintiles: stable sort by value (earlier index first on ties),
/// split into five contiguous groups of n/5 with the remainder going to the
/// lower quintiles.
QuintileAssignment quintile_assign(std::span<const double> values);

struct QuintileVector {
  Conditioner conditioner = Conditioner::volume;
  Side side = Side::top;
  std::array<double, 5> mean{};
  std::array<double, 5> std{};
  std::vector<std::array<double, 5>> per_ticker;
  std::vector<std::string> tickers;
  std::vector<std::string> excluded;
};

/// Among days t whose successor t+1 is extreme, the distribution of the
/// quintile of v(t) or g(t); per ticker, then averaged across tickers.
QuintileVector preceding_quintile_distribution(const std::vector<NormalizedSeries>& universe,
                                               Conditioner conditioner, Side side, double fraction);

struct QuintileGrid {
  Side side = Side::top;
  // [volume quintile - 1][volatility quintile - 1]; nullopt where the cell is empty
  std::array<std::array<std::optional<double>, 5>, 5> cells{};
  std::array<std::array<std::size_t, 5>, 5> cell_counts{};
  std::array<std::array<std::size_t, 5>, 5> event_counts{};
  std::size_t total_eligible = 0;
  std::size_t total_events = 0;
  double unconditioned = 0.0;  // total_events / total_eligible
  std::vector<std::string> excluded;
};

/// Relative probability, in units of the unconditioned rate, that day t+1 is
/// extreme given the joint (volume, volatility) quintile of day t. Events are
/// pooled across tickers.
QuintileGrid joint_quintile_grid(const std::vector<NormalizedSeries>& universe, Side side, double fraction,
                                 QuintileMode mode = QuintileMode::per_stock);

struct R2Row {
  std::string ticker;
  double r2_g_only = 0.0;
  double r2_g_and_v = 0.0;
  double uplift = 0.0;  // relative
};

struct R2Uplift {
  std::vector<R2Row> rows;
  double mean_uplift = 0.0;
  double mean_abs_uplift = 0.0;
  std::vector<std::string> excluded;
};

/// OLS of g(t+1) on [1, g(t)] and on [1, g(t), v(t)], per ticker.
R2Uplift regression_r2_uplift(const std::vector<NormalizedSeries>& universe);

}  // namespace volvol
