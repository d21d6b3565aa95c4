#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "volvol/binning.hpp"
#include "volvol/distributions.hpp"

namespace volvol {

/// Coefficients of the volume-dependent cutoff power law
///   P(g | v) ∝ g^-(alpha v + a) exp(-(beta v + b) g),  g >= g_min.
struct TailCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double a = 0.0;
  double b = 1.0;

  double exponent(double v) const { return alpha * v + a; }  // xi(v)
  double rate(double v) const { return beta * v + b; }       // varsigma(v)
};

struct TailFitParams {
  TailCoefficients coef;
  double g_min = 0.1;
  std::size_t n_tail = 0;
  double nll = 0.0;
  // Diagnostics, not part of the model.
  std::size_t n_below_g_min = 0;
  std::size_t n_outside_v_window = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// NLL assigned to candidates with a non-positive rate at some sample volume.
inline constexpr double kInfeasiblePenalty = 1e12;

double log_conditional_density(double g, double v, const TailCoefficients& coef, double g_min);
double conditional_density(double g, double v, const TailFitParams& params);
/// P(G <= g | v) on [g_min, inf).
double conditional_cdf(double g, double v, const TailCoefficients& coef, double g_min);

/// Exact per-sample sum of -ln P(g | v). Returns kInfeasiblePenalty when the
/// rate is non-positive at any sample volume. Summation runs over fixed-size
/// chunks in index order, so the value does not depend on thread count.
double neg_log_likelihood(std::span<const GvPair> samples, const TailCoefficients& coef, double g_min);

/// Likelihood evaluator for the optimizer. The terms linear in the
/// coefficients reduce to four sample sums; the volume-only normaliser term
/// h(v) = ln Gamma(1 - xi, varsigma g_min) + (xi - 1) ln varsigma is evaluated on
/// a uniform node grid over the sample volume range, and the per-sample
/// cubic-Lagrange interpolation weights are pre-aggregated onto the nodes.
/// One evaluation therefore costs O(nodes) incomplete-gamma calls.
class TailLikelihood {
 public:
  TailLikelihood(std::span<const GvPair> samples, double g_min, std::size_t nodes = 512);

  double operator()(const TailCoefficients& coef) const;
  bool feasible(const TailCoefficients& coef) const;

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  std::size_t size() const { return n_; }

 private:
  double g_min_;
  std::size_t n_ = 0;
  double v_min_ = 0.0;
  double v_max_ = 0.0;
  double sum_v_log_g_ = 0.0;
  double sum_log_g_ = 0.0;
  double sum_v_g_ = 0.0;
  double sum_g_ = 0.0;
  std::vector<double> node_v_;
  std::vector<double> node_weight_;
};

struct TailFitOptions {
  double g_min = 0.1;
  TailCoefficients init{0.0, 0.0, 1.5, 1.0};
  TailCoefficients lower{-2.0, -5.0, -10.0, 0.01};
  TailCoefficients upper{2.0, 5.0, 10.0, 20.0};
  // Samples with v outside [v_lo, v_hi] are left out of the fit.
  double v_lo = -3.0;
  double v_hi = 3.0;
  std::size_t min_tail = 50;
  double diameter_tol = 1e-6;
  std::size_t max_evaluations = 100000;
};

/// Maximum-likelihood fit of the tail model by box-constrained Nelder-Mead.
/// The reported nll is the exact neg_log_likelihood at the returned coefficients.
TailFitParams fit_conditional_tail(std::span<const GvPair> samples, const TailFitOptions& options = {});

struct DensityGrid {
  std::vector<double> g_values;
  std::vector<double> v_values;                // feasible columns only
  std::vector<std::vector<double>> densities;  // densities[iv][ig]
  std::vector<double> omitted_v;               // infeasible columns
};

/// Evaluates conditional_density at the bin centers of g_range x v_range.
DensityGrid density_grid(const TailFitParams& params, const Binning& g_range, const Binning& v_range);

}  // namespace volvol
