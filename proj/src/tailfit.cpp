#include "volvol/tailfit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "volvol/error.hpp"
#include "volvol/parallel.hpp"
#include "volvol/simplex.hpp"
#include "volvol/special.hpp"

namespace volvol {

namespace {

std::string rate_error(double v) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "rate non-positive at v = " << v;
  return msg.str();
}

// h(v) = ln Gamma(1 - xi, varsigma g_min) + (xi - 1) ln varsigma: the per-sample
// normaliser contribution to the NLL. Assumes varsigma > 0.
double normaliser_term(double v, const TailCoefficients& coef, double g_min) {
  const double xi = coef.exponent(v);
  const double rate = coef.rate(v);
  return special::log_upper_gamma(1.0 - xi, rate * g_min) + (xi - 1.0) * std::log(rate);
}

}  // namespace

double log_conditional_density(double g, double v, const TailCoefficients& coef, double g_min) {
  const double rate = coef.rate(v);
  if (!(rate > 0.0)) throw AnalysisError(rate_error(v));
  if (!(g >= g_min)) throw AnalysisError("domain error: g below g_min");
  return -coef.exponent(v) * std::log(g) - rate * g - normaliser_term(v, coef, g_min);
}

double conditional_density(double g, double v, const TailFitParams& params) {
  return std::exp(log_conditional_density(g, v, params.coef, params.g_min));
}

double conditional_cdf(double g, double v, const TailCoefficients& coef, double g_min) {
  const double rate = coef.rate(v);
  if (!(rate > 0.0)) throw AnalysisError(rate_error(v));
  if (g <= g_min) return 0.0;
  const double s = 1.0 - coef.exponent(v);
  const double tail = special::log_upper_gamma(s, rate * g) - special::log_upper_gamma(s, rate * g_min);
  return -std::expm1(tail);
}

double neg_log_likelihood(std::span<const GvPair> samples, const TailCoefficients& coef, double g_min) {
  if (samples.empty()) throw AnalysisError("negative log-likelihood of an empty sample");
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  std::vector<char> below(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(samples.size(), (c + 1) * kChunk);
    double sum = 0.0;
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto& p = samples[i];
      if (!(p.g >= g_min)) {
        below[c] = 1;
        return;
      }
      const double rate = coef.rate(p.v);
      if (!(rate > 0.0)) {
        sum = kInfeasiblePenalty;
        break;
      }
      sum += coef.exponent(p.v) * std::log(p.g) + rate * p.g + normaliser_term(p.v, coef, g_min);
    }
    partial[c] = sum;
  });
  if (std::find(below.begin(), below.end(), 1) != below.end())
    throw AnalysisError("likelihood sample below g_min");
  double total = 0.0;
  for (double x : partial) {
    if (!std::isfinite(x) || x >= kInfeasiblePenalty) return kInfeasiblePenalty;
    total += x;
  }
  return total;
}

TailLikelihood::TailLikelihood(std::span<const GvPair> samples, double g_min, std::size_t nodes) : g_min_(g_min) {
  if (samples.empty()) throw AnalysisError("likelihood of an empty sample");
  n_ = samples.size();
  v_min_ = v_max_ = samples[0].v;
  for (const auto& p : samples) {
    if (!(p.g >= g_min)) throw AnalysisError("likelihood sample below g_min");
    const double lg = std::log(p.g);
    sum_v_log_g_ += p.v * lg;
    sum_log_g_ += lg;
    sum_v_g_ += p.v * p.g;
    sum_g_ += p.g;
    v_min_ = std::min(v_min_, p.v);
    v_max_ = std::max(v_max_, p.v);
  }

  const double span = v_max_ - v_min_;
  if (!(span > 1e-9) || nodes < 4) {
    // Degenerate volume range: every sample sits at (essentially) one volume.
    node_v_ = {0.5 * (v_min_ + v_max_)};
    node_weight_ = {static_cast<double>(n_)};
    return;
  }
  node_v_.resize(nodes);
  node_weight_.assign(nodes, 0.0);
  const double step = span / static_cast<double>(nodes - 1);
  for (std::size_t k = 0; k < nodes; ++k) node_v_[k] = v_min_ + step * static_cast<double>(k);
  node_v_.back() = v_max_;
  for (const auto& p : samples) {
    const double u = (p.v - v_min_) / step;
    const auto cell = static_cast<std::ptrdiff_t>(std::floor(u));
    const auto j0 = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(cell - 1, 0, static_cast<std::ptrdiff_t>(nodes) - 4));
    for (std::size_t m = 0; m < 4; ++m) {
      double w = 1.0;
      for (std::size_t l = 0; l < 4; ++l)
        if (l != m)
          w *= (u - static_cast<double>(j0 + l)) / (static_cast<double>(m) - static_cast<double>(l));
      node_weight_[j0 + m] += w;
    }
  }
}

bool TailLikelihood::feasible(const TailCoefficients& coef) const {
  return coef.rate(v_min_) > 0.0 && coef.rate(v_max_) > 0.0;
}

double TailLikelihood::operator()(const TailCoefficients& coef) const {
  if (!feasible(coef)) return kInfeasiblePenalty;
  double total = coef.alpha * sum_v_log_g_ + coef.a * sum_log_g_ + coef.beta * sum_v_g_ + coef.b * sum_g_;
  for (std::size_t k = 0; k < node_v_.size(); ++k) total += node_weight_[k] * normaliser_term(node_v_[k], coef, g_min_);
  return std::isfinite(total) ? std::min(total, kInfeasiblePenalty) : kInfeasiblePenalty;
}

TailFitParams fit_conditional_tail(std::span<const GvPair> samples, const TailFitOptions& options) {
  if (!(options.g_min > 0.0)) throw ConfigError("g_min must be positive");
  TailFitParams result;
  result.g_min = options.g_min;
  std::vector<GvPair> tail;
  for (const auto& p : samples) {
    if (!(p.g >= options.g_min)) {
      ++result.n_below_g_min;
    } else if (!(p.v >= options.v_lo && p.v <= options.v_hi)) {
      ++result.n_outside_v_window;
    } else {
      tail.push_back(p);
    }
  }
  if (tail.size() < options.min_tail)
    throw AnalysisError("no tail samples: " + std::to_string(tail.size()) + " samples with g >= g_min inside the "
                        "volume window, need " + std::to_string(options.min_tail));

  const TailLikelihood likelihood(tail, options.g_min);
  if (!likelihood.feasible(options.init))
    throw AnalysisError("infeasible initialization: rate b + beta v is non-positive over the sample volume range");

  auto unpack = [](const std::vector<double>& x) { return TailCoefficients{x[0], x[1], x[2], x[3]}; };
  auto pack = [](const TailCoefficients& c) { return std::vector<double>{c.alpha, c.beta, c.a, c.b}; };
  const Box box{pack(options.lower), pack(options.upper)};
  SimplexOptions sopt;
  sopt.diameter_tol = options.diameter_tol;
  sopt.max_evaluations = options.max_evaluations;
  const auto best = minimize_nelder_mead([&](const std::vector<double>& x) { return likelihood(unpack(x)); },
                                         pack(options.init), box, sopt);

  result.coef = unpack(best.x);
  result.n_tail = tail.size();
  result.nll = neg_log_likelihood(tail, result.coef, options.g_min);
  result.evaluations = best.evaluations;
  result.converged = best.converged;
  return result;
}

DensityGrid density_grid(const TailFitParams& params, const Binning& g_range, const Binning& v_range) {
  if (g_range.lo() < params.g_min) throw AnalysisError("density grid: g range starts below g_min");
  DensityGrid grid;
  grid.g_values = g_range.centers();
  for (double v : v_range.centers()) {
    if (!(params.coef.rate(v) > 0.0)) {
      grid.omitted_v.push_back(v);
      continue;
    }
    std::vector<double> column;
    column.reserve(grid.g_values.size());
    for (double g : grid.g_values) column.push_back(conditional_density(g, v, params));
    grid.v_values.push_back(v);
    grid.densities.push_back(std::move(column));
  }
  if (grid.v_values.empty()) throw AnalysisError("density grid: rate non-positive over the entire volume range");
  return grid;
}

}  // namespace volvol
