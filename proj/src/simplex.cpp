#include "volvol/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "volvol/error.hpp"

namespace volvol {

std::vector<double> Box::clamp(std::vector<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// One Nelder-Mead descent from a fresh simplex around `start`.
SimplexResult descend(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& start,
                      const Box& box, const SimplexOptions& opt, std::size_t budget) {
  const std::size_t n = start.size();
  std::size_t evals = 0;
  auto eval = [&](std::vector<double> x) {
    x = box.clamp(std::move(x));
    const double fx = f(x);
    ++evals;
    return Vertex{std::move(x), std::isnan(fx) ? std::numeric_limits<double>::infinity() : fx};
  };

  std::vector<Vertex> simplex;
  simplex.push_back(eval(start));
  for (std::size_t i = 0; i < n; ++i) {
    auto x = start;
    const double step = opt.initial_step_fraction * (box.hi[i] - box.lo[i]);
    x[i] = x[i] + step <= box.hi[i] ? x[i] + step : x[i] - step;
    simplex.push_back(eval(std::move(x)));
  }

  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  auto affine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + t * (w[i] - c[i]);
    return x;
  };

  bool converged = false;
  while (evals < budget) {
    std::stable_sort(simplex.begin(), simplex.end(), by_f);
    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) diameter = std::max(diameter, distance(simplex[0].x, simplex[k].x));
    if (diameter < opt.diameter_tol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].x[i] / static_cast<double>(n);
    Vertex& worst = simplex[n];

    Vertex reflected = eval(affine(centroid, worst.x, -1.0));
    if (reflected.f < simplex[0].f) {
      Vertex expanded = eval(affine(centroid, worst.x, -2.0));
      worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < simplex[n - 1].f) {
      worst = std::move(reflected);
    } else {
      const bool outside = reflected.f < worst.f;
      Vertex contracted = outside ? eval(affine(centroid, reflected.x, 0.5)) : eval(affine(centroid, worst.x, 0.5));
      if (contracted.f < (outside ? reflected.f : worst.f)) {
        worst = std::move(contracted);
      } else {
        for (std::size_t k = 1; k <= n; ++k) simplex[k] = eval(affine(simplex[0].x, simplex[k].x, 0.5));
      }
    }
  }
  std::stable_sort(simplex.begin(), simplex.end(), by_f);
  return {simplex[0].x, simplex[0].f, evals, converged};
}

}  // namespace

SimplexResult minimize_nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> start, const Box& box, const SimplexOptions& options) {
  if (box.lo.size() != start.size() || box.hi.size() != start.size())
    throw ConfigError("simplex: box and start dimensions differ");
  for (std::size_t i = 0; i < start.size(); ++i)
    if (!(box.lo[i] < box.hi[i])) throw ConfigError("simplex: empty box side");

  SimplexResult best = descend(f, box.clamp(std::move(start)), box, options, options.max_evaluations);
  std::size_t total = best.evaluations;
  for (int r = 0; r < options.max_restarts && best.converged && total < options.max_evaluations; ++r) {
    SimplexResult next = descend(f, best.x, box, options, options.max_evaluations - total);
    total += next.evaluations;
    const bool improved = next.f < best.f - 1e-12 * (1.0 + std::abs(best.f));
    if (next.f <= best.f) best = std::move(next);
    if (!improved) break;
  }
  best.evaluations = total;
  return best;
}

}  // namespace volvol
