#include "corrloss/entanglement.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace corrloss {

SeedState optimal_classical_seed(const ChannelConfig& cfg, const OptimizerOptions& options) {
  return {maximize_classical(cfg, options).params, omega_spectrum(cfg.n)};
}

GeneralCov seed_global_covariance(const SeedState& seed) {
  const int n = static_cast<int>(seed.params.modes.size());
  if (n != seed.basis.size()) {
    throw std::invalid_argument("seed_global_covariance: basis and encoding sizes differ");
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const ModeEncoding& m = seed.params.modes[j];
    v(j, j) = (m.t + 0.5) * std::exp(m.r);
    v(n + j, n + j) = (m.t + 0.5) * std::exp(-m.r);
  }
  return GeneralCov(std::move(v));
}

GeneralCov seed_local_covariance(const SeedState& seed) {
  return to_local_basis(seed_global_covariance(seed), seed.basis);
}

double mean_reduced_entropy(const SeedState& seed) {
  const GeneralCov local = seed_local_covariance(seed);
  double total = 0.0;
  for (int k = 0; k < local.modes(); ++k) {
    total += single_mode_entropy(reduce_to_mode(local, k));
  }
  return total / local.modes();
}

double env_ppt_eigenvalue(double s, double T) {
  if (!(T >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("env_ppt_eigenvalue: need finite s and T >= 0");
  }
  const ChannelConfig cfg{2, 1.0, s, T, 0.0};
  return ppt_min_symplectic(TwoModeCov::from_general(env_local_covariance(cfg)));
}

bool env_is_separable(double s, double T) {
  return env_ppt_eigenvalue(s, T) >= 0.5 - kPhysicalTolerance;
}

double separability_boundary_temperature(double s) { return 0.5 * std::expm1(std::abs(s)); }

namespace {

double boundary_temperature_numeric(double s) {
  auto excess = [s](double T) { return env_ppt_eigenvalue(s, T) - 0.5; };
  const double f0 = excess(0.0);
  if (f0 >= 0.0) {
    return 0.0;
  }
  double hi = 1.0;
  double f_hi = excess(hi);
  while (f_hi < 0.0) {
    hi *= 2.0;
    f_hi = excess(hi);
  }
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      excess, 0.0, hi, f0, f_hi,
      [](double x, double y) { return std::abs(y - x) <= 1e-14 * std::max(1.0, y); }, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

SeparabilityScan env_separability_scan(std::span<const double> s_grid,
                                       std::span<const double> T_grid) {
  if (s_grid.empty() || T_grid.empty()) {
    throw std::invalid_argument("env_separability_scan: empty grid");
  }
  SeparabilityScan out;
  out.grid.reserve(s_grid.size() * T_grid.size());
  for (double T : T_grid) {
    for (double s : s_grid) {
      const double nu = env_ppt_eigenvalue(s, T);
      out.grid.push_back({s, T, nu, nu >= 0.5 - kPhysicalTolerance});
    }
  }
  for (double s : s_grid) {
    out.boundary.push_back({s, boundary_temperature_numeric(s),
                            separability_boundary_temperature(s)});
  }
  return out;
}

}  // namespace corrloss
