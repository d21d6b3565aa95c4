#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "volvol/binning.hpp"

namespace volvol {

/// One (volatility, volume) observation.
struct GvPair {
  double g = 0.0;
  double v = 0.0;
};

struct Pdf {
  std::vector<double> bin_centers;
  std::vector<double> densities;
  std::vector<std::size_t> counts;
  std::size_t total_n = 0;  // every sample offered, in range or not

  std::size_t in_range() const;
};

/// densities[j] = counts[j] / (in_range * width_j). Throws "empty histogram"
/// when no sample lies in [lo, hi).
Pdf histogram_pdf(std::span<const double> samples, const Binning& binning);

/// One-sample KS statistic of pre-standardised samples against N(0, 1).
double normality_check(std::span<const double> samples);

/// g-samples grouped by the volume bin their v falls in; out-of-range v are counted, not kept.
struct VolumePartition {
  std::vector<std::vector<double>> g_by_bin;
  std::vector<std::vector<double>> v_by_bin;
  std::size_t out_of_range = 0;
};
VolumePartition partition_by_volume(std::span<const GvPair> pooled, const Binning& volume_bins);

struct ConditionalPdfFamily {
  Binning volume_bins;
  std::map<std::size_t, Pdf> curves;      // keyed by volume-bin index
  std::vector<std::size_t> bin_occupancy;
  std::size_t out_of_range = 0;
};

ConditionalPdfFamily conditional_pdf(std::span<const GvPair> pooled, const Binning& volume_bins,
                                     const Binning& g_bins, std::size_t min_count = 100);

struct CollapseReport {
  double offset = 0.0;
  std::vector<std::size_t> bins;                 // volume-bin indices compared
  std::vector<std::size_t> bin_counts;
  std::vector<std::vector<double>> pairwise_ks;  // g / (v + offset)
  double collapse_score = 0.0;
  std::vector<std::vector<double>> unscaled_pairwise_ks;  // raw g, for reference
  double unscaled_score = 0.0;
  std::size_t out_of_range = 0;
};

/// Rescales each retained sample to g / (v + offset) and compares every pair
/// of volume bins holding at least `min_count` samples.
CollapseReport scale_collapse(std::span<const GvPair> pooled, const Binning& volume_bins, double offset,
                              std::size_t min_count = 100);

}  // namespace volvol
