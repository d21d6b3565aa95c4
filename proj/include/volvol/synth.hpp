#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "volvol/normalize.hpp"
#include "volvol/random.hpp"
#include "volvol/tailfit.hpp"

namespace volvol {

enum class Scenario { model, iid, collapse, monotone_envelope, injected_dependence };

const char* to_string(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& name);

struct SynthSpec {
  std::size_t n_days = 4000;
  std::size_t n_tickers = 30;
  TailCoefficients coef{0.4, -1.23, -2.5, 3.0};
  double g_min = 0.1;
  std::optional<double> v_lo;  // truncation of the standard-normal volume law
  std::optional<double> v_hi;
  Scenario scenario = Scenario::model;
  std::uint64_t seed = 7;
  double collapse_offset = 4.5;
  double extreme_fraction = 0.01;  // injected-dependence tail
};

/// Standard-normal draws, truncated to [v_lo, v_hi] by rejection. Throws when
/// the truncation interval holds less than 1e-6 probability.
std::vector<double> sample_volume(std::size_t n, const SynthSpec& spec, Rng& rng);

/// Inverse-CDF sampler for the tail model at one fixed volume: the CDF is
/// tabulated by Simpson quadrature on 4096 log-spaced points spanning
/// [g_min, g_upper], where 1 - F(g_upper) = 1e-6 is found by bisection, and
/// inverted by interpolation that is monotone in the CDF.
class TailSampler {
 public:
  static constexpr std::size_t kGridPoints = 4096;

  TailSampler(double v, const TailCoefficients& coef, double g_min);

  double operator()(Rng& rng) const { return quantile(rng.uniform()); }
  double quantile(double u) const;
  /// Tabulated CDF (piecewise linear in ln g between grid points).
  double cdf(double g) const;
  double g_upper() const { return grid_.back(); }

 private:
  std::vector<double> grid_;  // g values
  std::vector<double> cdf_;   // normalised cumulative probability at each grid point
};

double sample_conditional_volatility(double v, const TailCoefficients& coef, double g_min, Rng& rng);

/// Draw from the exact tail law by safeguarded Newton inversion of
/// conditional_cdf. Used for model-scenario universes, where every sample has
/// its own v and a table per draw would be wasteful.
double sample_tail_exact(double v, const TailCoefficients& coef, double g_min, Rng& rng);

/// Universe of synthetic NormalizedSeries. Ticker k uses the stream
/// Rng(seed, k); tickers are named S000, S001, ...
std::vector<NormalizedSeries> generate_universe(const SynthSpec& spec);

/// Writes each series as <TICKER>.csv in ingest format (price path from 100
/// with returns of size 0.01 g and seeded signs, volume round(exp(v) 1e6)),
/// plus synthetic_meta.json describing the spec.
void write_synthetic_csv(const std::vector<NormalizedSeries>& universe, const SynthSpec& spec,
                         const std::filesystem::path& directory);

}  // namespace volvol
