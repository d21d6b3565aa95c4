#include "volvol/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "volvol/error.hpp"
#include "volvol/parallel.hpp"

namespace volvol {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Plain decimal: digits with an optional fractional part. No sign, exponent or separators.
std::optional<double> parse_decimal(std::string_view s) {
  const auto dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (!whole.empty() && !all_digits(whole)) return std::nullopt;
  if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty() && whole.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

enum class RowStatus { ok, zero_volume, malformed };

RowStatus parse_row(std::string_view line, DailyBar& bar) {
  std::string_view fields[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = line.find(',', start);
    if (i < 2 && comma == std::string_view::npos) return RowStatus::malformed;
    if (i == 2 && comma != std::string_view::npos) return RowStatus::malformed;
    fields[i] = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    start = comma + 1;
  }
  const auto date = Date::parse(fields[0]);
  const auto close = parse_decimal(fields[1]);
  const auto volume = parse_count(fields[2]);
  if (!date || !close || !volume || !(*close > 0.0)) return RowStatus::malformed;
  bar = DailyBar{*date, *close, *volume};
  return *volume == 0 ? RowStatus::zero_volume : RowStatus::ok;
}

}  // namespace

std::pair<StockSeries, ValidationReport> parse_daily_series(std::istream& in, std::string ticker) {
  ValidationReport report;
  report.ticker = ticker;
  StockSeries series;
  series.ticker = std::move(ticker);

  std::string line;
  if (!std::getline(in, line)) throw DataError(series.ticker + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (trim(line) != "date,close,volume")
    throw DataError(series.ticker + ": expected header 'date,close,volume'");

  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    ++report.rows_read;
    DailyBar bar;
    switch (parse_row(row, bar)) {
      case RowStatus::ok:
        series.bars.push_back(bar);
        break;
      case RowStatus::zero_volume:
        ++report.rows_dropped_zero_volume;
        break;
      case RowStatus::malformed:
        ++report.rows_dropped_malformed;
        break;
    }
  }
  if (in.bad()) throw IoError(series.ticker + ": read error");

  for (std::size_t i = 1; i < series.bars.size(); ++i)
    if (series.bars[i].date < series.bars[i - 1].date) ++report.rows_reordered;
  std::stable_sort(series.bars.begin(), series.bars.end(),
                   [](const DailyBar& a, const DailyBar& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < series.bars.size(); ++i) {
    if (series.bars[i].date == series.bars[i - 1].date)
      throw DataError(series.ticker + ": duplicate date " + series.bars[i].date.to_string());
    if (series.bars[i - 1].date.days_until(series.bars[i].date) > 1) ++report.date_gaps;
  }
  report.rows_retained = series.bars.size();
  if (series.bars.size() < 2) throw DataError(series.ticker + ": insufficient data (fewer than 2 valid rows)");
  return {std::move(series), report};
}

std::pair<StockSeries, ValidationReport> parse_daily_series(const std::filesystem::path& path, std::string ticker) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return parse_daily_series(in, std::move(ticker));
}

Universe load_universe(const std::filesystem::path& directory) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec))
    throw IoError("input_dir: not a readable directory: " + directory.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (ec) throw IoError("input_dir: cannot list " + directory.string());
  if (files.empty()) throw IoError("no input series in " + directory.string());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.stem().string() < b.stem().string(); });

  Universe universe;
  universe.series.resize(files.size());
  universe.reports.resize(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    auto [series, report] = parse_daily_series(files[i], files[i].stem().string());
    universe.series[i] = std::move(series);
    universe.reports[i] = std::move(report);
  });
  return universe;
}

void write_daily_series(std::ostream& out, const StockSeries& series) {
  out << "date,close,volume\n";
  char buf[64];
  for (const auto& bar : series.bars) {
    auto res = std::to_chars(buf, buf + sizeof buf, bar.close, std::chars_format::fixed);
    out << bar.date.to_string() << ',' << std::string_view(buf, res.ptr - buf) << ',' << bar.volume << '\n';
  }
}

void write_daily_series(const std::filesystem::path& path, const StockSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_daily_series(out, series);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace volvol
