#include "volvol/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "volvol/error.hpp"
#include "volvol/parallel.hpp"
#include "volvol/stats.hpp"

namespace volvol {

std::size_t Pdf::in_range() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Pdf histogram_pdf(std::span<const double> samples, const Binning& binning) {
  Pdf pdf;
  pdf.bin_centers = binning.centers();
  pdf.counts.assign(binning.size(), 0);
  pdf.densities.assign(binning.size(), 0.0);
  pdf.total_n = samples.size();
  for (double x : samples)
    if (auto j = binning.locate(x)) ++pdf.counts[*j];
  const std::size_t in_range = pdf.in_range();
  if (in_range == 0) throw AnalysisError("empty histogram: no samples in [" + std::to_string(binning.lo()) + ", " +
                                         std::to_string(binning.hi()) + ")");
  for (std::size_t j = 0; j < binning.size(); ++j)
    pdf.densities[j] = static_cast<double>(pdf.counts[j]) / (static_cast<double>(in_range) * binning.width(j));
  return pdf;
}

double normality_check(std::span<const double> samples) {
  if (samples.size() < 20) throw AnalysisError("normality check needs at least 20 samples");
  if (!(stats::population_std(samples) > 1e-13 * std::max(1.0, std::abs(stats::mean(samples))))) throw AnalysisError("degenerate sample: zero variance");
  return stats::ks_one_sample(samples, stats::normal_cdf);
}

VolumePartition partition_by_volume(std::span<const GvPair> pooled, const Binning& volume_bins) {
  VolumePartition part;
  part.g_by_bin.resize(volume_bins.size());
  part.v_by_bin.resize(volume_bins.size());
  for (const auto& p : pooled) {
    if (auto j = volume_bins.locate(p.v)) {
      part.g_by_bin[*j].push_back(p.g);
      part.v_by_bin[*j].push_back(p.v);
    } else {
      ++part.out_of_range;
    }
  }
  return part;
}

ConditionalPdfFamily conditional_pdf(std::span<const GvPair> pooled, const Binning& volume_bins,
                                     const Binning& g_bins, std::size_t min_count) {
  const auto part = partition_by_volume(pooled, volume_bins);
  ConditionalPdfFamily family{volume_bins, {}, {}, part.out_of_range};
  family.bin_occupancy.resize(volume_bins.size());
  for (std::size_t j = 0; j < volume_bins.size(); ++j) {
    family.bin_occupancy[j] = part.g_by_bin[j].size();
    if (family.bin_occupancy[j] < min_count) continue;
    // A populated volume bin whose g all fall outside g_bins (e.g. g = 0 on log bins) carries no curve.
    const bool any_in_range = std::any_of(part.g_by_bin[j].begin(), part.g_by_bin[j].end(),
                                          [&](double g) { return g_bins.locate(g).has_value(); });
    if (any_in_range) family.curves.emplace(j, histogram_pdf(part.g_by_bin[j], g_bins));
  }
  if (family.curves.empty())
    throw AnalysisError("insufficient conditional data: no volume bin has " + std::to_string(min_count) +
                        " samples");
  return family;
}

namespace {

std::vector<std::vector<double>> pairwise_ks(const std::vector<std::vector<double>>& sorted_samples) {
  const std::size_t k = sorted_samples.size();
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    m[i][j] = m[j][i] = stats::ks_two_sample_sorted(sorted_samples[i], sorted_samples[j]);
  });
  return m;
}

double max_entry(const std::vector<std::vector<double>>& m) {
  double mx = 0.0;
  for (const auto& row : m)
    for (double x : row) mx = std::max(mx, x);
  return mx;
}

}  // namespace

CollapseReport scale_collapse(std::span<const GvPair> pooled, const Binning& volume_bins, double offset,
                              std::size_t min_count) {
  const auto part = partition_by_volume(pooled, volume_bins);
  CollapseReport report;
  report.offset = offset;
  report.out_of_range = part.out_of_range;

  double v_lowest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < volume_bins.size(); ++j) {
    if (part.g_by_bin[j].size() < min_count) continue;
    report.bins.push_back(j);
    report.bin_counts.push_back(part.g_by_bin[j].size());
    for (double v : part.v_by_bin[j]) v_lowest = std::min(v_lowest, v);
  }
  if (report.bins.size() < 2)
    throw AnalysisError("scale collapse needs at least 2 volume bins with " + std::to_string(min_count) +
                        " samples");
  if (!(v_lowest + offset > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "offset too small: v + offset must be positive for every sample; minimum admissible offset is "
        << -v_lowest << " (exclusive)";
    throw AnalysisError(msg.str());
  }

  std::vector<std::vector<double>> scaled, raw;
  for (std::size_t j : report.bins) {
    const auto& g = part.g_by_bin[j];
    const auto& v = part.v_by_bin[j];
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = g[i] / (v[i] + offset);
    std::sort(s.begin(), s.end());
    scaled.push_back(std::move(s));
    std::vector<double> r = g;
    std::sort(r.begin(), r.end());
    raw.push_back(std::move(r));
  }
  report.pairwise_ks = pairwise_ks(scaled);
  report.collapse_score = max_entry(report.pairwise_ks);
  report.unscaled_pairwise_ks = pairwise_ks(raw);
  report.unscaled_score = max_entry(report.unscaled_pairwise_ks);
  return report;
}

}  // namespace volvol
