#pragma once

#include <functional>

namespace volvol::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod integration over the finite interval
/// [a, b]; stops when the estimated error is below max(abs_tol, rel_tol*|I|)
/// or after max_intervals bisections.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol = 0.0, int max_intervals = 2000);

}  // namespace volvol::quadrature
