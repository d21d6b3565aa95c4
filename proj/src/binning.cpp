#include "volvol/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "volvol/error.hpp"

namespace volvol {

Binning::Binning(double lo, double hi, std::size_t n_bins, BinScheme scheme)
    : lo_(lo), hi_(hi), n_(n_bins), scheme_(scheme) {
  if (!(lo < hi)) throw ConfigError("binning requires lo < hi");
  if (n_bins == 0) throw ConfigError("binning requires at least one bin");
  if (scheme == BinScheme::logarithmic && !(lo > 0.0)) throw ConfigError("logarithmic binning requires lo > 0");
  edges_.resize(n_ + 1);
  for (std::size_t j = 0; j <= n_; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(n_);
    edges_[j] = scheme == BinScheme::linear ? lo + f * (hi - lo) : lo * std::pow(hi / lo, f);
  }
  edges_.front() = lo;
  edges_.back() = hi;
}

double Binning::center(std::size_t j) const {
  return scheme_ == BinScheme::linear ? 0.5 * (edges_[j] + edges_[j + 1]) : std::sqrt(edges_[j] * edges_[j + 1]);
}

std::vector<double> Binning::centers() const {
  std::vector<double> c(n_);
  for (std::size_t j = 0; j < n_; ++j) c[j] = center(j);
  return c;
}

std::optional<std::size_t> Binning::locate(double x) const {
  if (!(x >= lo_) || !(x < hi_)) return std::nullopt;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

}  // namespace volvol
