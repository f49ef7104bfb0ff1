#pragma once

// Small Nelder-Mead simplex minimizer used to polish grid optima.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>

namespace qcorr::detail {

struct SimplexOptions {
  double initial_step = 0.05;
  double x_tolerance = 1e-13;
  double f_tolerance = 1e-16;
  std::size_t max_iterations = 5000;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

template <class F>
SimplexResult nelder_mead_minimize(F&& f, const Eigen::VectorXd& start,
                                   const SimplexOptions& opts = {}) {
  const Eigen::Index dim = start.size();
  const auto m = static_cast<std::size_t>(dim) + 1;
  std::vector<Eigen::VectorXd> pts(m, start);
  std::vector<double> vals(m);
  for (Eigen::Index k = 0; k < dim; ++k) pts[static_cast<std::size_t>(k) + 1](k) += opts.initial_step;
  for (std::size_t k = 0; k < m; ++k) vals[k] = f(pts[k]);

  std::vector<std::size_t> order(m);
  SimplexResult result;
  for (result.iterations = 0; result.iterations < opts.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[m - 2];

    double size = 0.0;
    for (std::size_t k = 0; k < m; ++k) size = std::max(size, (pts[k] - pts[best]).cwiseAbs().maxCoeff());
    if (size < opts.x_tolerance || vals[worst] - vals[best] < opts.f_tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t k = 0; k < m; ++k) {
      if (k != worst) centroid += pts[k];
    }
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double f_reflected = f(reflected);
    if (f_reflected < vals[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < vals[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double f_contracted = f(contracted);
    if (f_contracted < (outside ? f_reflected : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_contracted;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (k == best) continue;
      pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
      vals[k] = f(pts[k]);
    }
  }

  const auto best_it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(best_it - vals.begin());
  result.x = pts[idx];
  result.f = vals[idx];
  return result;
}

}  // namespace qcorr::detail
