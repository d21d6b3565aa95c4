#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace volvol {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::vector<double> clamp(std::vector<double> x) const;
};

struct SimplexOptions {
  double diameter_tol = 1e-6;
  std::size_t max_evaluations = 100000;
  double initial_step_fraction = 0.1;  // of each box side
  int max_restarts = 3;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with trial points projected onto the box.
/// After convergence the search restarts from the best vertex with a fresh
/// simplex until a restart no longer improves f.
SimplexResult minimize_nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> start, const Box& box, const SimplexOptions& options = {});

}  // namespace volvol
