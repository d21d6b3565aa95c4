#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "volvol/error.hpp"
#include "volvol/ingest.hpp"
#include "volvol/random.hpp"

using namespace volvol;
namespace fs = std::filesystem;

namespace {

std::pair<StockSeries, ValidationReport> parse(const std::string& text, const std::string& ticker = "T") {
  std::istringstream in(text);
  return parse_daily_series(in, ticker);
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("volvol_ingest_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("two valid rows") {
  auto [s, r] = parse("date,close,volume\n2020-01-02,100.0,1000\n2020-01-03,101.0,1200\n");
  REQUIRE(s.bars.size() == 2);
  CHECK(s.bars[0].date == Date(2020, 1, 2));
  CHECK(s.bars[1].close == 101.0);
  CHECK(s.bars[1].volume == 1200u);
  CHECK(r.rows_read == 2);
  CHECK(r.rows_retained == 2);
  CHECK(r.rows_dropped_zero_volume == 0);
  CHECK(r.rows_dropped_malformed == 0);
  CHECK(r.date_gaps == 0);
}

TEST_CASE("zero volume rows are dropped and counted") {
  auto [s, r] = parse("date,close,volume\n2020-01-02,100,1000\n2020-01-03,101,0\n2020-01-06,102,5\n");
  CHECK(s.bars.size() == 2);
  CHECK(r.rows_dropped_zero_volume == 1);
  CHECK(r.rows_read == r.rows_retained + r.rows_dropped_zero_volume + r.rows_dropped_malformed);
  CHECK(r.date_gaps == 1);
}

TEST_CASE("malformed rows are dropped and counted") {
  const std::string text =
      "date,close,volume\r\n"
      "2020-01-02,100,1000\r\n"
      "2020-01-03,1,000.5,10\r\n"   // thousands separator
      "2020-01-04,abc,10\r\n"
      "2020-01-05,-3,10\r\n"        // non-positive price
      "2020-01-06,3,-10\r\n"
      "2020-13-01,3,10\r\n"
      "2020-01-07,3\r\n"
      "2020-01-08,3,1e3\r\n"
      "\r\n"
      "2020-01-09,3.5,7\r\n";
  auto [s, r] = parse(text);
  CHECK(s.bars.size() == 2);
  CHECK(r.rows_read == 9);
  CHECK(r.rows_dropped_malformed == 7);
  CHECK(r.rows_read == r.rows_retained + r.rows_dropped_zero_volume + r.rows_dropped_malformed);
}

TEST_CASE("out-of-order rows are sorted") {
  auto [s, r] = parse("date,close,volume\n2020-01-06,3,1\n2020-01-02,1,1\n2020-01-03,2,1\n");
  REQUIRE(s.bars.size() == 3);
  for (std::size_t i = 1; i < s.bars.size(); ++i) CHECK(s.bars[i - 1].date < s.bars[i].date);
  CHECK(s.bars[0].close == 1.0);
  CHECK(r.rows_reordered > 0);
}

TEST_CASE("errors: insufficient data, duplicates, header") {
  CHECK_THROWS_WITH_AS(parse("date,close,volume\n2020-01-02,100,1000\n"), doctest::Contains("insufficient data"),
                       DataError);
  CHECK_THROWS_WITH_AS(parse("date,close,volume\n2020-01-02,100,1000\n2020-01-02,101,10\n"),
                       doctest::Contains("duplicate date 2020-01-02"), DataError);
  CHECK_THROWS_AS(parse("Date,Close,Volume\n2020-01-02,100,1000\n2020-01-03,101,10\n"), DataError);
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(parse_daily_series(fs::path("/nonexistent/X.csv"), "X"), IoError);
}

TEST_CASE("byte order mark is accepted") {
  auto [s, r] = parse("\xEF\xBB\xBF" "date,close,volume\n2020-01-02,100,1000\n2020-01-03,101,1200\n");
  CHECK(s.bars.size() == 2);
}

TEST_CASE("parsing is deterministic and round-trips") {
  Rng rng(17);
  std::ostringstream text;
  text << "date,close,volume\n";
  Date d(2001, 3, 1);
  for (int i = 0; i < 500; ++i) {
    d = d.plus_days(1 + static_cast<int>(rng.uniform() * 3));
    text << d.to_string() << ',' << 10.0 + 90.0 * rng.uniform() << ',' << static_cast<long>(1 + rng.uniform() * 1e7)
         << '\n';
  }
  auto [s1, r1] = parse(text.str());
  auto [s2, r2] = parse(text.str());
  CHECK(s1 == s2);
  std::ostringstream out;
  write_daily_series(out, s1);
  auto [s3, r3] = parse(out.str());
  CHECK(s3 == s1);
}

TEST_CASE("load_universe orders by ticker and rejects empty directories") {
  const auto dir = scratch_dir("order");
  const std::string body = "date,close,volume\n2020-01-02,100,1000\n2020-01-03,101,1200\n";
  write_file(dir / "GE.csv", body);
  write_file(dir / "BA.csv", body);
  write_file(dir / "notes.txt", "ignored");
  const auto u = load_universe(dir);
  REQUIRE(u.series.size() == 2);
  CHECK(u.series[0].ticker == "BA");
  CHECK(u.series[1].ticker == "GE");
  CHECK(u.reports.size() == 2);

  const auto empty = scratch_dir("empty");
  CHECK_THROWS_WITH_AS(load_universe(empty), doctest::Contains("no input series"), IoError);
  CHECK_THROWS_AS(load_universe(dir / "missing"), IoError);
}
