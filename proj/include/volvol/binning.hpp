#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace volvol {

enum class BinScheme { linear, logarithmic };

/// Half-open bins [edge_j, edge_{j+1}) covering [lo, hi).
class Binning {
 public:
  Binning(double lo, double hi, std::size_t n_bins, BinScheme scheme = BinScheme::linear);

  static Binning linear(double lo, double hi, std::size_t n) { return {lo, hi, n, BinScheme::linear}; }
  static Binning log(double lo, double hi, std::size_t n) { return {lo, hi, n, BinScheme::logarithmic}; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return n_; }
  BinScheme scheme() const { return scheme_; }

  const std::vector<double>& edges() const { return edges_; }
  double width(std::size_t j) const { return edges_[j + 1] - edges_[j]; }
  /// Arithmetic midpoint for linear bins, geometric midpoint for log bins.
  double center(std::size_t j) const;
  std::vector<double> centers() const;

  /// Bin containing x, or nullopt if x lies outside [lo, hi) or is NaN.
  std::optional<std::size_t> locate(double x) const;

 private:
  double lo_;
  double hi_;
  std::size_t n_;
  BinScheme scheme_;
  std::vector<double> edges_;
};

}  // namespace volvol
