#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "corrloss/optimizer.hpp"

namespace corrloss {

namespace {

constexpr int kStages = 6;
constexpr std::size_t kStarts = 4;

// Zooming grid search on a box. The first stage scans `points` values per
// axis; each of the kStarts best grid points is then refined by repeatedly
// rescanning a box of one grid step around the running best.
template <std::size_t D, class F>
double zoom_grid(F&& f, std::array<double, D> lo0, std::array<double, D> hi0, int points) {
  using Point = std::array<double, D>;
  auto scan = [&](const Point& lo, const Point& hi, auto&& visit) {
    std::array<int, D> idx{};
    Point x{};
    while (true) {
      for (std::size_t d = 0; d < D; ++d) {
        x[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (points - 1);
      }
      visit(x, f(x));
      std::size_t d = 0;
      while (d < D && ++idx[d] == points) {
        idx[d] = 0;
        ++d;
      }
      if (d == D) {
        return;
      }
    }
  };

  std::vector<std::pair<double, Point>> coarse;
  scan(lo0, hi0, [&](const Point& x, double v) { coarse.emplace_back(v, x); });
  const std::size_t starts = std::min(kStarts, coarse.size());
  std::partial_sort(coarse.begin(), coarse.begin() + starts, coarse.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });

  double overall = coarse.front().first;
  for (std::size_t k = 0; k < starts; ++k) {
    auto [best, arg] = coarse[k];
    Point lo = lo0;
    Point hi = hi0;
    for (int stage = 1; stage < kStages; ++stage) {
      for (std::size_t d = 0; d < D; ++d) {
        const double step = (hi[d] - lo[d]) / (points - 1);
        lo[d] = std::max(lo0[d], arg[d] - step);
        hi[d] = std::min(hi0[d], arg[d] + step);
      }
      scan(lo, hi, [&](const Point& x, double v) {
        if (v > best) {
          best = v;
          arg = x;
        }
      });
    }
    overall = std::max(overall, best);
  }
  return overall;
}

// Seed with squeezing r and a share u^3 of the thermal room left by r (the
// cube crowds grid points toward pure seeds).
struct Seed {
  double t;
  double energy;  // (t + 1/2) cosh r
};

Seed seed_at(double r, double u, double N) {
  const double room = std::max((N + 0.5) / std::cosh(r) - 0.5, 0.0);
  const double t = u * u * u * room;
  return {t, (t + 0.5) * std::cosh(r)};
}

double mode_grid(Quantity quantity, const GlobalEnvMode& env, double eta, double N) {
  if (N == 0.0) {
    return 0.0;
  }
  const double radius = std::acosh(2.0 * N + 1.0);
  if (quantity == Quantity::Classical) {
    auto chi = [&](const std::array<double, 3>& x) {
      const Seed seed = seed_at(x[0], x[1], N);
      const double noise = std::max(2.0 * (N + 0.5 - seed.energy), 0.0);
      const double c_q = x[2] * noise;
      return holevo_chi(ModeEncoding{seed.t, x[0], c_q, noise - c_q, N}, env, eta);
    };
    return zoom_grid<3>(chi, {-radius, 0.0, 0.0}, {radius, 1.0, 1.0}, 16);
  }
  auto info = [&](const std::array<double, 2>& x) {
    const Seed seed = seed_at(x[0], x[1], N);
    return quantity == Quantity::Quantum ? coherent_information(seed.t, x[0], env, eta)
                                         : quantum_mutual_information(seed.t, x[0], env, eta);
  };
  const double best = zoom_grid<2>(info, {-radius, 0.0}, {radius, 1.0}, 40);
  // An idle mode (vacuum seed) carries zero coherent information.
  return quantity == Quantity::Quantum ? std::max(best, 0.0) : best;
}

}  // namespace

double brute_force_oracle(const ChannelConfig& cfg, Quantity quantity) {
  cfg.validate();
  if (cfg.n > 2) {
    throw std::invalid_argument("brute_force_oracle: n must be <= 2");
  }
  const std::vector<GlobalEnvMode> env = env_global_modes(cfg);
  if (cfg.n == 1) {
    return mode_grid(quantity, env[0], cfg.eta, cfg.N);
  }
  const double budget = 2.0 * cfg.N;
  auto split = [&](const std::array<double, 1>& x) {
    const double first = x[0] * budget;
    return 0.5 * (mode_grid(quantity, env[0], cfg.eta, first) +
                  mode_grid(quantity, env[1], cfg.eta, budget - first));
  };
  return zoom_grid<1>(split, {0.0}, {1.0}, 17);
}

}  // namespace corrloss
