#include <doctest.h>

#include <cmath>
#include <numbers>

#include "volvol/error.hpp"
#include "volvol/normalize.hpp"
#include "volvol/random.hpp"
#include "volvol/stats.hpp"

using namespace volvol;

namespace {

StockSeries make_series(const std::vector<double>& prices, const std::vector<std::uint64_t>& volumes) {
  StockSeries s{"T", {}};
  Date d(2010, 1, 4);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    s.bars.push_back({d, prices[i], volumes[i]});
    d = d.plus_days(1);
  }
  return s;
}

StockSeries random_series(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  std::vector<std::uint64_t> q(n);
  double price = 50.0;
  for (std::size_t i = 0; i < n; ++i) {
    price *= std::exp(0.02 * rng.normal());
    p[i] = price;
    q[i] = static_cast<std::uint64_t>(std::exp(13.0 + 0.001 * i + 0.5 * rng.normal()));
  }
  return make_series(p, q);
}

}  // namespace

TEST_CASE("log returns") {
  auto r = log_returns(make_series({5, 5, 5}, {1, 1, 1}));
  CHECK(r == std::vector<double>{0.0, 0.0});
  r = log_returns(make_series({1, std::numbers::e, std::numbers::e * std::numbers::e}, {1, 1, 1}));
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-15));
  r = log_returns(make_series({100, 110}, {1, 1}));
  CHECK(r[0] == doctest::Approx(0.0953102).epsilon(1e-6));
  CHECK_THROWS_AS(log_returns(make_series({1, -1}, {1, 1})), DataError);
}

TEST_CASE("detrend: closed-form three-point example") {
  // ln Q = c + [1, 3, 2]; the constant c only moves the intercept
  StockSeries t = make_series({1, 2, 3}, {0, 0, 0});
  const double c = 20.0;  // adding a constant to ln Q only moves the intercept
  t.bars[0].volume = static_cast<std::uint64_t>(std::llround(std::exp(c + 1.0)));
  t.bars[1].volume = static_cast<std::uint64_t>(std::llround(std::exp(c + 3.0)));
  t.bars[2].volume = static_cast<std::uint64_t>(std::llround(std::exp(c + 2.0)));
  const auto [res, dfit] = detrend_log_volume(t);
  CHECK(dfit.slope == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(dfit.intercept == doctest::Approx(c + 1.5).epsilon(1e-9));
  CHECK(res[0] == doctest::Approx(-0.5).epsilon(1e-7));
  CHECK(res[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(res[2] == doctest::Approx(-0.5).epsilon(1e-7));
  CHECK(dfit.n == 3);
}

TEST_CASE("detrend: constant volume gives zero slope and residuals") {
  const auto [res, fit] = detrend_log_volume(make_series({1, 2, 3, 4}, {777, 777, 777, 777}));
  CHECK(std::abs(fit.slope) < 1e-15);
  CHECK(fit.intercept == doctest::Approx(std::log(777.0)));
  for (double r : res) CHECK(std::abs(r) < 1e-14);
}

TEST_CASE("detrend: exact exponential trend leaves no residual") {
  std::vector<double> p;
  std::vector<std::uint64_t> q;
  for (int t = 0; t < 20; ++t) {
    p.push_back(1.0 + t);
    q.push_back(std::uint64_t{1} << t);  // ln Q = t ln 2
  }
  const auto [res, fit] = detrend_log_volume(make_series(p, q));
  CHECK(fit.slope == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  for (double r : res) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("normalize: symmetric returns give unit volatility") {
  // returns [1, -1]
  const auto s = make_series({1.0, std::numbers::e, 1.0}, {10, 40, 20});
  const auto n = normalize_series(s);
  REQUIRE(n.size() == 2);
  CHECK(n.g[0] == doctest::Approx(1.0));
  CHECK(n.g[1] == doctest::Approx(1.0));
  CHECK(n.dates[0] == s.bars[1].date);
  CHECK(n.stats.std_return == doctest::Approx(1.0));
}

TEST_CASE("normalize invariants on random series") {
  Rng rng(321);
  for (int k = 0; k < 20; ++k) {
    const auto s = random_series(rng, 100 + 37 * k);
    const auto n = normalize_series(s);
    CHECK(n.size() == s.bars.size() - 1);
    CHECK(n.dates.size() == n.size());
    CHECK(std::abs(stats::mean(n.v)) < 1e-9);
    CHECK(std::abs(stats::population_std(n.v) - 1.0) < 1e-9);
    for (double g : n.g) CHECK(g >= 0.0);
    CHECK_FALSE(n.synthetic);
  }
}

TEST_CASE("normalize is scale invariant") {
  Rng rng(8);
  const auto s = random_series(rng, 400);
  StockSeries scaled = s;
  for (auto& b : scaled.bars) {
    b.close *= 37.5;
    b.volume *= 8;
  }
  const auto a = normalize_series(s);
  const auto b = normalize_series(scaled);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.g[i] - b.g[i]) < 1e-12);
    CHECK(std::abs(a.v[i] - b.v[i]) < 1e-12);
  }
}

TEST_CASE("normalize rejects constant series") {
  CHECK_THROWS_WITH_AS(normalize_series(make_series({5, 5, 5, 5}, {1, 2, 3, 4})), doctest::Contains("degenerate series"),
                       AnalysisError);
  CHECK_THROWS_WITH_AS(normalize_series(make_series({5, 6, 5, 6}, {3, 3, 3, 3})), doctest::Contains("degenerate series"),
                       AnalysisError);
}

TEST_CASE("normalize_universe preserves order") {
  Rng rng(1);
  auto a = random_series(rng, 50);
  auto b = random_series(rng, 60);
  a.ticker = "AA";
  b.ticker = "BB";
  const auto u = normalize_universe({a, b});
  REQUIRE(u.size() == 2);
  CHECK(u[0].ticker == "AA");
  CHECK(u[1].size() == 59);
}
