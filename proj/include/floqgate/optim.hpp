// Nelder-Mead downhill simplex.
#ifndef FLOQGATE_OPTIM_HPP
#define FLOQGATE_OPTIM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace floqgate {

struct SimplexOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  std::size_t max_evals = 20000;
  double x_tol = 1e-8;
  double f_tol = 1e-12;

  void validate() const {
    if (!(reflection > 0 && expansion > 1 && contraction > 0 && contraction < 1 && shrink > 0 &&
          shrink < 1))
      throw std::invalid_argument(
          "simplex options: need reflection > 0, expansion > 1, 0 < contraction, shrink < 1");
  }
};

template <typename Scalar = double>
struct SimplexResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar f;
  std::size_t evals = 0;
  bool converged = false;
};

/// Minimizes f from x0. The optional observer sees the best objective value
/// after every iteration.
template <typename Scalar = double, typename Objective>
SimplexResult<Scalar> nelder_mead(Objective&& objective,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
                                  const SimplexOptions& opts = {},
                                  const std::function<void(Scalar)>& observer = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  opts.validate();
  const auto n = static_cast<std::size_t>(x0.size());
  if (n == 0) throw std::invalid_argument("nelder_mead: empty starting point");

  std::size_t evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return static_cast<Scalar>(objective(x));
  };

  std::vector<Vec> pts(n + 1, x0);
  std::vector<Scalar> fs(n + 1);
  fs[0] = eval(x0);
  if (!std::isfinite(static_cast<double>(fs[0])))
    throw std::invalid_argument("nelder_mead: objective is not finite at x0");
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    pts[i + 1][idx] += Scalar(0.05) * std::max(std::abs(x0[idx]), Scalar(1));
    fs[i + 1] = eval(pts[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (observer) observer(fs[best]);

    Scalar diameter = 0;
    for (std::size_t i = 0; i <= n; ++i)
      diameter = std::max(diameter, (pts[i] - pts[best]).template lpNorm<Eigen::Infinity>());
    if (diameter < opts.x_tol && fs[worst] - fs[best] < opts.f_tol) {
      converged = true;
      break;
    }
    if (evals >= opts.max_evals) break;

    Vec centroid = Vec::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= Scalar(n);

    const Vec xr = centroid + opts.reflection * (centroid - pts[worst]);
    const Scalar fr = eval(xr);
    if (fr < fs[best]) {
      const Vec xe = centroid + opts.expansion * (xr - centroid);
      const Scalar fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fs[worst] = fe;
      } else {
        pts[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      pts[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    // contraction, outside if the reflected point improved on the worst
    const bool outside = fr < fs[worst];
    const Vec xc = outside ? Vec(centroid + opts.contraction * (xr - centroid))
                           : Vec(centroid + opts.contraction * (pts[worst] - centroid));
    const Scalar fc = eval(xc);
    if (fc < (outside ? fr : fs[worst])) {
      pts[worst] = xc;
      fs[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + opts.shrink * (pts[i] - pts[best]);
      fs[i] = eval(pts[i]);
    }
  }

  const auto best_it = std::min_element(fs.begin(), fs.end());
  const auto bi = static_cast<std::size_t>(best_it - fs.begin());
  return {pts[bi], fs[bi], evals, converged};
}

}  // namespace floqgate

#endif  // FLOQGATE_OPTIM_HPP
