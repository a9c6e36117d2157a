// line_search.hpp: bounded one-dimensional maximization used by the
// per-mode solver and the allocation fallback.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace corrloss::detail {

struct LineMax {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

// Scans `grid_points` equispaced points of [lo, hi] (endpoints included),
// plus the optional incumbent x0, then polishes the best bracket with
// Brent's method. Never returns worse than the best point evaluated.
template <class F>
LineMax maximize_on_interval(F&& f, double lo, double hi, int grid_points,
                             const double* x0 = nullptr) {
  LineMax best;
  auto consider = [&](double x) {
    const double v = f(x);
    ++best.evaluations;
    if (v > best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };

  if (!(hi > lo)) {
    consider(lo);
    return best;
  }
  grid_points = std::max(grid_points, 3);
  const double step = (hi - lo) / (grid_points - 1);
  int best_index = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + i * step;
    const double before = best.value;
    consider(x);
    if (best.value > before) {
      best_index = i;
    }
  }
  double bracket_lo = lo + std::max(best_index - 1, 0) * step;
  double bracket_hi = std::min(lo + (best_index + 1) * step, hi);
  if (x0 != nullptr && *x0 >= lo && *x0 <= hi) {
    const double before = best.value;
    consider(*x0);
    if (best.value > before) {
      bracket_lo = std::max(lo, *x0 - step);
      bracket_hi = std::min(hi, *x0 + step);
    }
  }

  std::uintmax_t iterations = 100;
  const auto [x, negative] = boost::math::tools::brent_find_minima(
      [&](double z) { return -f(z); }, bracket_lo, bracket_hi, 30, iterations);
  best.evaluations += static_cast<int>(iterations);
  if (-negative > best.value) {
    best.value = -negative;
    best.x = x;
  }
  return best;
}

}  // namespace corrloss::detail
