#include "corrloss/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "line_search.hpp"

namespace corrloss {

namespace {

struct Group {
  const ModeValueFunction* fn;
  double cap;
  // Non-concave groups may leave members idle and share the photons among
  // the others.
  bool spread = false;
  // Start of the range where the marginal decreases; 0 for concave groups.
  double tail_start = 0.0;

  // (active members, group value per member) at mean photons x.
  std::pair<int, double> best_active(double x) const {
    const int m = multiplicity();
    if (!spread || m == 1) {
      return {m, fn->value(x)};
    }
    std::pair<int, double> best{m, fn->value(x)};
    for (int k = 1; k < m; ++k) {
      const double v = static_cast<double>(k) / m * fn->value(x * m / k);
      if (v > best.second) {
        best = {k, v};
      }
    }
    return best;
  }
  double value(double x) const { return best_active(x).second; }
  double marginal(double x) const {
    if (spread) {
      return numeric_marginal([this](double y) { return value(y); }, x);
    }
    return fn->marginal ? fn->marginal(x) : numeric_marginal(fn->value, x);
  }
  int multiplicity() const { return fn->multiplicity; }
};

double weighted_value(std::span<const Group> groups, const std::vector<double>& photons) {
  double total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    total += groups[g].multiplicity() * groups[g].value(photons[g]);
  }
  return total;
}

// Samples the marginal on a cubic grid (activation thresholds make it rise
// right above 0). Returns the location of the largest sampled marginal when
// the marginal is not nonincreasing.
std::optional<double> marginal_peak(const Group& group, const AllocationOptions& options) {
  const int samples = std::max(options.concavity_samples, 3);
  double previous = group.marginal(0.0);
  double peak_x = 0.0;
  double peak = previous;
  bool rising = false;
  for (int i = 1; i < samples; ++i) {
    const double f = static_cast<double>(i) / (samples - 1);
    const double x = group.cap * f * f * f;
    const double current = group.marginal(x);
    if (current > previous + options.concavity_tolerance * (1.0 + std::abs(previous))) {
      rising = true;
    }
    if (current > peak) {
      peak = current;
      peak_x = x;
    }
    previous = current;
  }
  if (!rising) {
    return std::nullopt;
  }
  return peak_x;
}

// Photons a group takes at multiplier lambda: the maximizer of
// value(x) - lambda x, found on the decreasing-marginal tail and compared
// with idling.
double demand(const Group& group, double lambda, const AllocationOptions& options,
              int& iterations) {
  const double lo = group.tail_start;
  const double at_lo = group.marginal(lo);
  double x = lo;
  if (at_lo > lambda) {
    const double at_cap = group.marginal(group.cap);
    if (at_cap >= lambda) {
      x = group.cap;
    } else {
      std::uintmax_t max_iter = static_cast<std::uintmax_t>(options.max_iterations);
      const double tol = options.photon_tolerance;
      const auto [a, b] = boost::math::tools::toms748_solve(
          [&](double y) { return group.marginal(y) - lambda; }, lo, group.cap, at_lo - lambda,
          at_cap - lambda, [tol](double u, double v) { return std::abs(v - u) <= tol; },
          max_iter);
      iterations += static_cast<int>(max_iter);
      x = 0.5 * (a + b);
    }
  }
  if (lo > 0.0 && group.value(0.0) >= group.value(x) - lambda * x) {
    return 0.0;
  }
  return x;
}

void distribute_residual(std::span<const Group> groups, std::vector<double>& photons,
                         double budget) {
  double used = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    used += groups[g].multiplicity() * photons[g];
  }
  const double residual = budget - used;
  if (residual == 0.0) {
    return;
  }
  // Prefer groups strictly inside their feasible range.
  auto eligible = [&](std::size_t g) {
    return residual > 0.0 ? photons[g] < groups[g].cap : photons[g] > 0.0;
  };
  int weight = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (eligible(g) && photons[g] > 0.0 && photons[g] < groups[g].cap) {
      weight += groups[g].multiplicity();
    }
  }
  const bool interior_only = weight > 0;
  if (!interior_only) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (eligible(g)) {
        weight += groups[g].multiplicity();
      }
    }
  }
  if (weight == 0) {
    return;
  }
  const double share = residual / weight;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const bool interior = photons[g] > 0.0 && photons[g] < groups[g].cap;
    if (eligible(g) && (!interior_only || interior)) {
      photons[g] = std::clamp(photons[g] + share, 0.0, groups[g].cap);
    }
  }
}

double kkt_residual(std::span<const Group> groups, const std::vector<double>& photons,
                    double lambda) {
  double worst = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double m = groups[g].marginal(photons[g]);
    double mismatch = 0.0;
    if (photons[g] <= 0.0) {
      mismatch = std::max(0.0, m - lambda);
    } else if (photons[g] >= groups[g].cap) {
      mismatch = std::max(0.0, lambda - m);
    } else {
      mismatch = std::abs(m - lambda);
    }
    worst = std::max(worst, mismatch);
  }
  return worst / std::max(1.0, std::abs(lambda));
}

// Repeated pairwise transfers between groups, each a bounded line search.
std::vector<double> pairwise_search(std::span<const Group> groups, std::vector<double> photons,
                                    int max_sweeps, int& iterations) {
  double current = weighted_value(groups, photons);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double start = current;
    for (std::size_t a = 0; a < groups.size(); ++a) {
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        const double ma = groups[a].multiplicity();
        const double mb = groups[b].multiplicity();
        // Move `delta` photons (in total) from b to a.
        const double lo = -ma * photons[a];
        const double hi = mb * photons[b];
        auto pair_value = [&](double delta) {
          const double xa = std::clamp(photons[a] + delta / ma, 0.0, groups[a].cap);
          const double xb = std::clamp(photons[b] - delta / mb, 0.0, groups[b].cap);
          return ma * groups[a].value(xa) + mb * groups[b].value(xb);
        };
        const double zero = 0.0;
        const detail::LineMax best = detail::maximize_on_interval(pair_value, lo, hi, 9, &zero);
        iterations += best.evaluations;
        const double baseline = pair_value(0.0);
        if (best.value > baseline) {
          photons[a] = std::clamp(photons[a] + best.x / ma, 0.0, groups[a].cap);
          photons[b] = std::clamp(photons[b] - best.x / mb, 0.0, groups[b].cap);
        }
      }
    }
    current = weighted_value(groups, photons);
    if (current - start <= 1e-12 * std::max(1.0, std::abs(current))) {
      break;
    }
  }
  return photons;
}

}  // namespace

double numeric_marginal(const std::function<double(double)>& value, double N) {
  const double h = 1e-5 * std::max(1.0, N);
  if (N < h) {
    // Second-order one-sided difference.
    return (-3.0 * value(N) + 4.0 * value(N + h) - value(N + 2.0 * h)) / (2.0 * h);
  }
  return (value(N + h) - value(N - h)) / (2.0 * h);
}

Allocation allocate_photons(std::span<const ModeValueFunction> modes, double N,
                            const AllocationOptions& options) {
  if (modes.empty()) {
    throw std::invalid_argument("allocate_photons: no modes");
  }
  if (!(N >= 0.0)) {
    throw std::invalid_argument("allocate_photons: N must be >= 0");
  }
  int total_count = 0;
  for (const ModeValueFunction& m : modes) {
    if (m.multiplicity < 1 || !m.value) {
      throw std::invalid_argument("allocate_photons: malformed mode value function");
    }
    total_count += m.multiplicity;
  }
  const double budget = total_count * N;

  std::vector<Group> groups;
  groups.reserve(modes.size());
  for (const ModeValueFunction& m : modes) {
    groups.push_back({&m, budget / m.multiplicity});
  }

  Allocation result;
  result.photons.assign(groups.size(), 0.0);
  if (budget == 0.0) {
    result.total_value = weighted_value(groups, result.photons);
    for (const Group& g : groups) {
      result.active_members.push_back(g.multiplicity());
    }
    return result;
  }

  for (Group& g : groups) {
    if (const std::optional<double> peak = marginal_peak(g, options)) {
      result.concave = false;
      g.spread = true;
      g.tail_start = *peak;
    }
  }
  // Spreading changes the value function; locate its tail again.
  for (Group& g : groups) {
    if (g.spread) {
      g.tail_start = marginal_peak(g, options).value_or(0.0);
    }
  }
  auto finish = [&](double multiplier) {
    result.multiplier = multiplier;
    result.total_value = weighted_value(groups, result.photons);
    result.kkt_residual = kkt_residual(groups, result.photons, multiplier);
    result.active_members.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      result.active_members[g] = groups[g].best_active(result.photons[g]).first;
    }
  };

  if (groups.size() == 1) {
    // Identical modes share the budget evenly among the active ones.
    result.photons[0] = N;
    finish(groups[0].marginal(N));
    result.kkt_residual = 0.0;
    return result;
  }

  // Water-filling: find lambda with sum_g m_g demand_g(lambda) = budget.
  double lambda_hi = 0.0;
  for (const Group& g : groups) {
    lambda_hi = std::max(lambda_hi, g.marginal(g.tail_start));
  }
  std::vector<double> water(groups.size(), N);
  double lambda = 0.0;
  bool root_ok = true;
  if (lambda_hi > 0.0) {
    auto excess = [&](double l) {
      double used = 0.0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        used += groups[g].multiplicity() * demand(groups[g], l, options, result.iterations);
      }
      return used - budget;
    };
    double lo = 0.0;
    double hi = lambda_hi;
    double f_lo = excess(lo);
    // f_hi <= 0 by construction (all demands vanish at the largest marginal).
    double f_hi = excess(hi);
    if (f_lo <= 0.0) {
      hi = lo;
    } else if (f_hi < 0.0) {
      std::uintmax_t max_iter = static_cast<std::uintmax_t>(options.max_iterations);
      const double tol = options.multiplier_tolerance;
      try {
        const auto bracket = boost::math::tools::toms748_solve(
            excess, lo, hi, f_lo, f_hi,
            [tol](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, b); },
            max_iter);
        lo = bracket.first;
        hi = bracket.second;
        root_ok = static_cast<int>(max_iter) < options.max_iterations;
      } catch (const std::exception&) {
        root_ok = false;
      }
    } else {
      lo = hi;
    }
    // Demand may jump where a non-concave group switches on; take the side
    // that overshoots and trim interior groups.
    lambda = result.concave ? 0.5 * (lo + hi) : lo;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      water[g] = demand(groups[g], lambda, options, result.iterations);
    }
    distribute_residual(groups, water, budget);
  }

  if (result.concave) {
    result.photons = std::move(water);
    finish(lambda);
    result.converged = root_ok && result.kkt_residual <= 1e-6;
    return result;
  }

  // Non-concave value functions: polish the Lagrangian allocation by
  // pairwise transfers, and try the other natural starts.
  result.photons = pairwise_search(groups, water, 50, result.iterations);
  double best_value = weighted_value(groups, result.photons);
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(groups.size(), N));
  if (groups.size() <= 3) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<double> all_in(groups.size(), 0.0);
      all_in[g] = groups[g].cap;
      starts.push_back(std::move(all_in));
    }
  }
  for (const std::vector<double>& start : starts) {
    if (weighted_value(groups, start) <= best_value) {
      continue;
    }
    std::vector<double> candidate = pairwise_search(groups, start, 50, result.iterations);
    const double v = weighted_value(groups, candidate);
    if (v > best_value) {
      best_value = v;
      result.photons = std::move(candidate);
    }
  }
  // First-order conditions still apply: equal marginals on the active groups.
  double active_marginal = 0.0;
  int active = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (result.photons[g] > 0.0 && result.photons[g] < groups[g].cap) {
      active_marginal += groups[g].marginal(result.photons[g]);
      ++active;
    }
  }
  finish(active > 0 ? active_marginal / active : lambda);
  result.converged = result.kkt_residual <= 1e-6;
  return result;
}

Allocation allocate_photons(const ModeValueFunction& mode, int n, double N,
                            const AllocationOptions& options) {
  if (n < 1) {
    throw std::invalid_argument("allocate_photons: n must be >= 1");
  }
  ModeValueFunction group = mode;
  group.multiplicity = n;
  const Allocation inner = allocate_photons(std::span<const ModeValueFunction>(&group, 1), N,
                                            options);
  return inner;
}

}  // namespace corrloss
