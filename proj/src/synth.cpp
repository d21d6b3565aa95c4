#include "volvol/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "volvol/error.hpp"
#include "volvol/parallel.hpp"
#include "volvol/special.hpp"
#include "volvol/stats.hpp"

namespace volvol {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::model: return "model";
    case Scenario::iid: return "iid";
    case Scenario::collapse: return "collapse";
    case Scenario::monotone_envelope: return "monotone-envelope";
    case Scenario::injected_dependence: return "injected-dependence";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(const std::string& name) {
  for (auto s : {Scenario::model, Scenario::iid, Scenario::collapse, Scenario::monotone_envelope,
                 Scenario::injected_dependence})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// P(lo < Z < hi) for standard normal Z, accurate in either tail.
double normal_mass(double lo, double hi) {
  if (lo >= 0.0) return 0.5 * (std::erfc(lo / std::sqrt(2.0)) - std::erfc(hi / std::sqrt(2.0)));
  if (hi <= 0.0) return 0.5 * (std::erfc(-hi / std::sqrt(2.0)) - std::erfc(-lo / std::sqrt(2.0)));
  return 1.0 - stats::normal_cdf(lo) - (1.0 - stats::normal_cdf(hi));
}

double truncated_normal_quantile(double p, double lo, double hi) {
  const double flo = std::isinf(lo) ? 0.0 : stats::normal_cdf(lo);
  const double fhi = std::isinf(hi) ? 1.0 : stats::normal_cdf(hi);
  return stats::normal_quantile(flo + p * (fhi - flo));
}

std::vector<double> sample_truncated(std::size_t n, double lo, double hi, Rng& rng) {
  if (!(lo < hi) || normal_mass(lo, hi) < 1e-6)
    throw ConfigError("volume truncation interval has negligible probability mass");
  std::vector<double> v(n);
  for (auto& x : v) {
    do {
      x = rng.normal();
    } while (!(x >= lo && x <= hi));
  }
  return v;
}

std::vector<Date> business_days(std::size_t n) {
  std::vector<Date> dates;
  dates.reserve(n);
  Date d(2000, 1, 3);
  while (dates.size() < n) {
    if (!d.is_weekend()) dates.push_back(d);
    d = d.plus_days(1);
  }
  return dates;
}

void check_rate(double v, const TailCoefficients& coef) {
  if (!(coef.rate(v) > 0.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "rate non-positive at v = %.17g", v);
    throw AnalysisError(buf);
  }
}

}  // namespace

std::vector<double> sample_volume(std::size_t n, const SynthSpec& spec, Rng& rng) {
  if (n == 0) throw ConfigError("sample_volume: n must be at least 1");
  return sample_truncated(n, spec.v_lo.value_or(-kInf), spec.v_hi.value_or(kInf), rng);
}

TailSampler::TailSampler(double v, const TailCoefficients& coef, double g_min) {
  check_rate(v, coef);
  if (!(g_min > 0.0)) throw ConfigError("g_min must be positive");
  const double xi = coef.exponent(v), rate = coef.rate(v), s = 1.0 - xi;
  const double log_norm = special::log_upper_gamma(s, rate * g_min);
  auto log_survival = [&](double g) { return special::log_upper_gamma(s, rate * g) - log_norm; };

  // Upper end of the table: survival 1e-6, bracketed by doubling then bisected in ln g.
  const double target = std::log(1e-6);
  double lo = g_min, hi = 2.0 * g_min;
  while (log_survival(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 100 && hi / lo > 1.0 + 1e-13; ++i) {
    const double mid = std::sqrt(lo * hi);
    (log_survival(mid) > target ? lo : hi) = mid;
  }

  // Cumulative Simpson quadrature in y = ln g of the integrand g^(1-xi) e^(-rate g).
  const std::size_t n = kGridPoints;
  const double y0 = std::log(g_min), y1 = std::log(hi);
  const double h = (y1 - y0) / static_cast<double>(n - 1);
  auto log_integrand = [&](double y) { return (1.0 - xi) * y - rate * std::exp(y); };
  std::vector<double> ends(n), mids(n - 1);
  for (std::size_t i = 0; i < n; ++i) ends[i] = log_integrand(y0 + h * static_cast<double>(i));
  for (std::size_t i = 0; i + 1 < n; ++i) mids[i] = log_integrand(y0 + h * (static_cast<double>(i) + 0.5));
  const double shift = std::max(*std::max_element(ends.begin(), ends.end()), *std::max_element(mids.begin(), mids.end()));

  grid_.resize(n);
  cdf_.resize(n);
  double acc = 0.0;
  grid_[0] = g_min;
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    acc += h / 6.0 * (std::exp(ends[i - 1] - shift) + 4.0 * std::exp(mids[i - 1] - shift) + std::exp(ends[i] - shift));
    grid_[i] = std::exp(y0 + h * static_cast<double>(i));
    cdf_[i] = acc;
  }
  grid_.back() = hi;
  for (auto& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

double TailSampler::quantile(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return grid_.front();
  if (it == cdf_.end()) return grid_.back();
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double span = cdf_[i] - cdf_[i - 1];
  const double f = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
  return std::exp(std::log(grid_[i - 1]) + f * (std::log(grid_[i]) - std::log(grid_[i - 1])));
}

double TailSampler::cdf(double g) const {
  if (g <= grid_.front()) return 0.0;
  if (g >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), g);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  const double f = (std::log(g) - std::log(grid_[i - 1])) / (std::log(grid_[i]) - std::log(grid_[i - 1]));
  return cdf_[i - 1] + f * (cdf_[i] - cdf_[i - 1]);
}

double sample_conditional_volatility(double v, const TailCoefficients& coef, double g_min, Rng& rng) {
  return TailSampler(v, coef, g_min)(rng);
}

double sample_tail_exact(double v, const TailCoefficients& coef, double g_min, Rng& rng) {
  check_rate(v, coef);
  const double xi = coef.exponent(v), rate = coef.rate(v), s = 1.0 - xi;
  const double log_norm = special::log_upper_gamma(s, rate * g_min);
  const double target = std::log1p(-rng.uniform());  // ln of the survival level

  // Solve ln S(e^y) = target for y = ln g; ln S decreases from 0 at y = ln g_min.
  auto log_surv = [&](double y) { return special::log_upper_gamma(s, rate * std::exp(y)) - log_norm; };
  double lo = std::log(g_min), hi = lo + 1.0;
  double f_hi = log_surv(hi);
  while (f_hi > target) {
    lo = hi;
    hi += 1.0;
    f_hi = log_surv(hi);
  }
  double y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double ls = special::log_upper_gamma(s, rate * std::exp(y));
    const double phi = ls - log_norm - target;
    if (phi > 0.0) lo = y; else hi = y;
    // d/dy ln S = -g p(g)/S(g) = -exp(s ln(rate g) - rate g - ln Gamma(s, rate g))
    const double g = std::exp(y);
    const double slope = -std::exp(s * std::log(rate * g) - rate * g - ls);
    double next = y - phi / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) < 1e-13 * std::max(1.0, std::abs(y)) || hi - lo < 1e-14) {
      y = next;
      break;
    }
    y = next;
  }
  return std::max(g_min, std::exp(y));
}

std::vector<NormalizedSeries> generate_universe(const SynthSpec& spec) {
  if (spec.n_days < 2) throw ConfigError("synth: n_days must be at least 2");
  if (spec.n_tickers < 1) throw ConfigError("synth: n_tickers must be at least 1");
  if (!(spec.g_min > 0.0)) throw ConfigError("synth: g_min must be positive");
  const double lo = spec.v_lo.value_or(-kInf), hi = spec.v_hi.value_or(kInf);
  if (spec.scenario == Scenario::model) {
    if (std::isinf(lo) || std::isinf(hi) || !(spec.coef.rate(lo) > 0.0) || !(spec.coef.rate(hi) > 0.0))
      throw ConfigError("infeasible spec: rate beta v + b must stay positive over the volume support; "
                        "truncate v to a feasible interval");
  }
  if (spec.scenario == Scenario::collapse && !(spec.collapse_offset > 0.0))
    throw ConfigError("synth: collapse offset must be positive");
  if (spec.scenario == Scenario::injected_dependence && !(spec.extreme_fraction > 0.0 && spec.extreme_fraction < 0.3))
    throw ConfigError("synth: injected-dependence fraction must lie in (0, 0.3)");

  const auto dates = business_days(spec.n_days);
  std::vector<NormalizedSeries> universe(spec.n_tickers);
  parallel_for(spec.n_tickers, [&](std::size_t k) {
    Rng rng(spec.seed, k);
    NormalizedSeries s;
    char name[16];
    std::snprintf(name, sizeof name, "S%03zu", k);
    s.ticker = name;
    s.synthetic = true;
    s.dates = dates;
    s.detrend.n = spec.n_days;
    const std::size_t n = spec.n_days;
    s.g.resize(n);

    switch (spec.scenario) {
      case Scenario::model:
        s.v = sample_truncated(n, lo, hi, rng);
        for (std::size_t t = 0; t < n; ++t) s.g[t] = sample_tail_exact(s.v[t], spec.coef, spec.g_min, rng);
        break;
      case Scenario::iid:
        s.v = sample_truncated(n, lo, hi, rng);
        for (auto& g : s.g) g = std::abs(rng.normal());
        break;
      case Scenario::collapse:
        // v + offset must stay positive so that g stays positive.
        s.v = sample_truncated(n, std::max(lo, -spec.collapse_offset + 1e-6), hi, rng);
        for (std::size_t t = 0; t < n; ++t) s.g[t] = (s.v[t] + spec.collapse_offset) * rng.exponential();
        break;
      case Scenario::monotone_envelope:
        s.v = sample_truncated(n, lo, hi, rng);
        for (std::size_t t = 0; t < n; ++t) s.g[t] = std::exp(s.v[t]) * rng.uniform(0.5, 1.0);
        break;
      case Scenario::injected_dependence: {
        // g is half-normal; its top `f` tail lies above Phi^-1(1 - f/2). When both
        // v(t) and g(t) sit in their population top quintiles, g(t+1) lands in
        // that tail with probability 3f instead of f.
        s.v = sample_truncated(n, lo, hi, rng);
        const double f = spec.extreme_fraction;
        const double v80 = truncated_normal_quantile(0.8, lo, hi);
        const double g80 = stats::normal_quantile(0.9);
        for (std::size_t t = 0; t < n; ++t) {
          const bool triggered = t > 0 && s.v[t - 1] > v80 && s.g[t - 1] > g80;
          const double p_tail = triggered ? 3.0 * f : f;
          const double u = rng.uniform(), w = rng.uniform();
          s.g[t] = u < p_tail ? -stats::normal_quantile(0.5 * f * w)
                              : stats::normal_quantile(0.5 + 0.5 * (1.0 - f) * w);
        }
        break;
      }
    }
    universe[k] = std::move(s);
  });
  return universe;
}

void write_synthetic_csv(const std::vector<NormalizedSeries>& universe, const SynthSpec& spec,
                         const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string());
  for (std::size_t k = 0; k < universe.size(); ++k) {
    const auto& s = universe[k];
    Rng signs(spec.seed ^ 0x5DEECE66DULL, k);
    StockSeries out;
    out.ticker = s.ticker;
    Date first = s.dates.front().plus_days(-1);
    while (first.is_weekend()) first = first.plus_days(-1);
    double price = 100.0;
    out.bars.push_back({first, price, 1000000});
    for (std::size_t t = 0; t < s.size(); ++t) {
      const double sign = signs.uniform() < 0.5 ? -1.0 : 1.0;
      price *= std::exp(sign * 0.01 * s.g[t]);
      const auto volume = static_cast<std::uint64_t>(std::max(1.0, std::round(std::exp(s.v[t]) * 1e6)));
      out.bars.push_back({s.dates[t], price, volume});
    }
    write_daily_series(directory / (s.ticker + ".csv"), out);
  }

  nlohmann::ordered_json meta;
  meta["synthetic"] = true;
  meta["scenario"] = to_string(spec.scenario);
  meta["seed"] = spec.seed;
  meta["n_days"] = spec.n_days;
  meta["n_tickers"] = spec.n_tickers;
  meta["alpha"] = spec.coef.alpha;
  meta["beta"] = spec.coef.beta;
  meta["a"] = spec.coef.a;
  meta["b"] = spec.coef.b;
  meta["g_min"] = spec.g_min;
  meta["v_lo"] = spec.v_lo ? nlohmann::ordered_json(*spec.v_lo) : nlohmann::ordered_json(nullptr);
  meta["v_hi"] = spec.v_hi ? nlohmann::ordered_json(*spec.v_hi) : nlohmann::ordered_json(nullptr);
  meta["rng"] = "mt19937_64 seeded by splitmix64(seed, ticker index)";
  meta["price_rule"] = "p0 = 100, p(t) = p(t-1) exp(+-0.01 g(t)) with seeded signs";
  meta["volume_rule"] = "first bar 1e6, then round(exp(v(t)) 1e6)";
  std::ofstream out(directory / "synthetic_meta.json", std::ios::binary);
  if (!out) throw IoError("cannot write synthetic_meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace volvol
