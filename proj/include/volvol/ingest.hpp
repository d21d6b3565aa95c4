#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "volvol/date.hpp"

namespace volvol {

struct DailyBar {
  Date date;
  double close = 0.0;
  std::uint64_t volume = 0;

  bool operator==(const DailyBar&) const = default;
};

/// Per-ticker daily bars, sorted by date with no duplicates, at least two bars.
struct StockSeries {
  std::string ticker;
  std::vector<DailyBar> bars;

  bool operator==(const StockSeries&) const = default;
};

struct ValidationReport {
  std::string ticker;
  std::size_t rows_read = 0;
  std::size_t rows_retained = 0;
  std::size_t rows_dropped_zero_volume = 0;
  std::size_t rows_dropped_malformed = 0;
  std::size_t rows_reordered = 0;  // rows found out of date order before sorting
  std::size_t date_gaps = 0;       // consecutive retained bars more than one calendar day apart
};

struct Universe {
  std::vector<StockSeries> series;
  std::vector<ValidationReport> reports;
};

/// Parses `date,close,volume` CSV text. Blank lines are ignored and not
/// counted; every other data line counts toward rows_read.
std::pair<StockSeries, ValidationReport> parse_daily_series(std::istream& in, std::string ticker);
std::pair<StockSeries, ValidationReport> parse_daily_series(const std::filesystem::path& path, std::string ticker);

/// Loads every `<TICKER>.csv` in `directory`, ordered by ticker.
Universe load_universe(const std::filesystem::path& directory);

/// Writes the series in the same CSV format parse_daily_series reads.
/// Prices use the shortest fixed-notation decimal that round-trips.
void write_daily_series(std::ostream& out, const StockSeries& series);
void write_daily_series(const std::filesystem::path& path, const StockSeries& series);

}  // namespace volvol
