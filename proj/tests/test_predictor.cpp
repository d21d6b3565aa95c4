#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "volvol/error.hpp"
#include "volvol/predictor.hpp"
#include "volvol/random.hpp"
#include "volvol/synth.hpp"

using namespace volvol;

namespace {

NormalizedSeries series_of(const std::string& ticker, const std::vector<double>& v, const std::vector<double>& g) {
  NormalizedSeries s;
  s.ticker = ticker;
  s.v = v;
  s.g = g;
  for (std::size_t i = 0; i < v.size(); ++i) s.dates.push_back(Date(2000, 1, 3).plus_days(static_cast<int>(i)));
  return s;
}

std::vector<NormalizedSeries> iid_universe() {
  SynthSpec spec;
  spec.scenario = Scenario::iid;
  return generate_universe(spec);
}

}  // namespace

TEST_CASE("extreme day set") {
  Rng rng(1);
  std::vector<double> g(1000);
  for (auto& x : g) x = rng.exponential();
  const auto top = extreme_day_set(g, 0.01, Side::top);
  REQUIRE(top.members.size() == 10);
  std::vector<double> sorted = g;
  std::sort(sorted.rbegin(), sorted.rend());
  for (auto i : top.members) CHECK(g[i] >= sorted[9]);
  CHECK(std::is_sorted(top.members.begin(), top.members.end()));
  CHECK(top.threshold == sorted[9]);

  std::vector<double> inc(500);
  std::iota(inc.begin(), inc.end(), 0.0);
  const auto last = extreme_day_set(inc, 0.01, Side::top);
  CHECK(last.members == std::vector<std::size_t>{495, 496, 497, 498, 499});
  const auto first = extreme_day_set(inc, 0.01, Side::bottom);
  CHECK(first.members == std::vector<std::size_t>{0, 1, 2, 3, 4});

  std::vector<double> ties(200, 1.0);
  CHECK(extreme_day_set(ties, 0.01, Side::top).members == std::vector<std::size_t>{0, 1});

  std::vector<double> short_g(50, 1.0);
  CHECK_THROWS_WITH_AS(extreme_day_set(short_g, 0.01, Side::top), doctest::Contains("insufficient data for fraction"),
                       AnalysisError);
  CHECK_THROWS_AS(extreme_day_set(g, 0.6, Side::top), ConfigError);
}

TEST_CASE("quintile assignment") {
  std::vector<double> x(10);
  std::iota(x.begin(), x.end(), 1.0);
  CHECK(quintile_assign(x).labels == std::vector<int>{1, 1, 2, 2, 3, 3, 4, 4, 5, 5});

  std::vector<double> eq(12, 3.0);
  const auto q = quintile_assign(eq);
  CHECK(q.labels == std::vector<int>{1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 5, 5});

  CHECK_THROWS_AS(quintile_assign(std::vector<double>{1, 2, 3, 4}), AnalysisError);

  Rng rng(3);
  std::vector<double> r(1003), t(1003);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = rng.normal();
    t[i] = std::exp(3.0 * r[i]) + 7.0;
  }
  const auto a = quintile_assign(r);
  CHECK(a.labels == quintile_assign(t).labels);
  std::array<int, 5> sizes{};
  for (int l : a.labels) ++sizes[l - 1];
  for (int s : sizes) CHECK(std::abs(s - 1003.0 / 5.0) <= 1.0);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t k = 0; k < 40; ++k)
      if (r[i] > r[k]) CHECK(a.labels[i] >= a.labels[k]);
}

TEST_CASE("preceding quintile distribution: iid is flat, rows sum to one") {
  const auto u = iid_universe();
  for (auto cond : {Conditioner::volume, Conditioner::volatility})
    for (auto side : {Side::top, Side::bottom}) {
      const auto q = preceding_quintile_distribution(u, cond, side, 0.01);
      CHECK(q.tickers.size() == 30);
      for (double m : q.mean) CHECK(std::abs(m - 0.2) <= 0.05);
      for (const auto& row : q.per_ticker) CHECK(std::abs(row[0] + row[1] + row[2] + row[3] + row[4] - 1.0) < 1e-12);
    }
}

TEST_CASE("joint grid accounting identities") {
  const auto u = iid_universe();
  for (auto mode : {QuintileMode::per_stock, QuintileMode::pooled}) {
    const auto grid = joint_quintile_grid(u, Side::top, 0.01, mode);
    std::size_t cells = 0, events = 0;
    double weighted = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 5; ++k) {
        cells += grid.cell_counts[i][k];
        events += grid.event_counts[i][k];
        if (grid.cells[i][k]) weighted += *grid.cells[i][k] * grid.cell_counts[i][k];
        if (grid.cells[i][k]) CHECK(*grid.cells[i][k] >= 0.0);
      }
    CHECK(cells == grid.total_eligible);
    CHECK(events == grid.total_events);
    CHECK(grid.total_eligible == 30 * 3999);
    CHECK(grid.total_events == 30 * 40);
    CHECK(weighted / grid.total_eligible == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(weighted * grid.unconditioned == doctest::Approx(static_cast<double>(grid.total_events)).epsilon(1e-9));
  }
}

TEST_CASE("joint grid: constructed dependence lights up cell (5,5)") {
  SynthSpec spec;
  spec.scenario = Scenario::injected_dependence;
  const auto grid = joint_quintile_grid(generate_universe(spec), Side::top, 0.01);
  REQUIRE(grid.cells[4][4]);
  CHECK(*grid.cells[4][4] >= 2.0);
}

TEST_CASE("joint grid needs enough events and marks empty cells") {
  Rng rng(4);
  std::vector<double> v(1000), g(1000);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = rng.normal();
    g[i] = std::abs(rng.normal());
  }
  CHECK_THROWS_AS(joint_quintile_grid({series_of("A", v, g)}, Side::top, 0.01), AnalysisError);

  // v and g identical: off-diagonal cells are empty
  std::vector<NormalizedSeries> u;
  for (int k = 0; k < 12; ++k) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g[i] = rng.exponential();
    u.push_back(series_of("S" + std::to_string(k), v, g));
  }
  const auto grid = joint_quintile_grid(u, Side::top, 0.01);
  CHECK_FALSE(grid.cells[0][4]);
  CHECK(grid.cell_counts[0][4] == 0);
  CHECK(grid.cells[2][2]);
}

TEST_CASE("regression R^2 uplift") {
  std::vector<double> g(100), v(100);
  Rng rng(6);
  // g(t+1) = g(t) + 1 is an exact affine function of g(t)
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = static_cast<double>(i);
    v[i] = rng.normal();
  }
  const auto perfect = regression_r2_uplift({series_of("P", v, g)});
  REQUIRE(perfect.rows.size() == 1);
  CHECK(perfect.rows[0].r2_g_only == doctest::Approx(1.0));
  CHECK(perfect.rows[0].uplift == doctest::Approx(0.0).epsilon(1e-9));

  std::vector<double> gi(10000), vi(10000);
  for (std::size_t i = 0; i < gi.size(); ++i) {
    gi[i] = std::abs(rng.normal());
    vi[i] = rng.normal();
  }
  const auto indep = regression_r2_uplift({series_of("I", vi, gi)});
  CHECK(indep.rows[0].r2_g_only <= 0.01);
  CHECK(indep.rows[0].r2_g_and_v <= 0.01);

  const auto shortie = regression_r2_uplift({series_of("S", std::vector<double>(20, 0.0), std::vector<double>(20, 1.0)),
                                             series_of("I", vi, gi)});
  CHECK(shortie.rows.size() == 1);
  CHECK(shortie.excluded.size() == 1);
}

TEST_CASE("nested R^2 dominance on every synthetic ticker") {
  for (auto sc : {Scenario::model, Scenario::iid, Scenario::collapse, Scenario::monotone_envelope,
                  Scenario::injected_dependence}) {
    SynthSpec spec;
    spec.scenario = sc;
    spec.n_days = 1000;
    if (sc == Scenario::model) {
      spec.v_lo = -2.0;
      spec.v_hi = 2.0;
    }
    const auto r = regression_r2_uplift(generate_universe(spec));
    for (const auto& row : r.rows) CHECK(row.r2_g_and_v >= row.r2_g_only);
  }
}
