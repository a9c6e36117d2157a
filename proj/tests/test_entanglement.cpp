#include <cmath>

#include <gtest/gtest.h>

#include "corrloss/analytic.hpp"
#include "corrloss/entanglement.hpp"
#include "oracles.hpp"

using namespace corrloss;

namespace {

SeedState seed_of(const std::vector<std::pair<double, double>>& tr) {
  SeedState seed;
  seed.basis = omega_spectrum(static_cast<int>(tr.size()));
  for (const auto& [t, r] : tr) {
    seed.params.modes.push_back({t, r, 0.0, 0.0, (t + 0.5) * std::cosh(r) - 0.5});
  }
  return seed;
}

// Smallest symplectic eigenvalue of the partial transpose, from the
// explicit two-use environment matrix.
double ppt_oracle(double s, double T) {
  Eigen::MatrixXd v = oracle::env_covariance(2, s, T);
  // Flip p of the second use: (q1, q2, p1, p2) ordering.
  Eigen::MatrixXd flip = Eigen::MatrixXd::Identity(4, 4);
  flip(3, 3) = -1.0;
  return oracle::symplectic_spectrum(flip * v * flip).back();
}

}  // namespace

TEST(Seed, IsotropicSeedIsBasisIndependent) {
  const SeedState seed = seed_of({{0.7, 0.0}, {0.7, 0.0}, {0.7, 0.0}, {0.7, 0.0}});
  EXPECT_TRUE(seed_local_covariance(seed).matrix().isApprox(1.2 * Eigen::MatrixXd::Identity(8, 8),
                                                            1e-14));
}

TEST(Seed, VacuumSeedHasNoEntanglement) {
  EXPECT_NEAR(mean_reduced_entropy(seed_of({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}})), 0.0, 1e-12);
}

TEST(Seed, OppositeSqueezingIsPureTwoModeState) {
  const double rho = 0.9;
  const SeedState seed = seed_of({{0.0, rho}, {0.0, -rho}});
  const GeneralCov local = seed_local_covariance(seed);
  for (double nu : oracle::symplectic_spectrum(local.matrix())) {
    EXPECT_NEAR(nu, 0.5, 1e-9);
  }
  // Each use alone is thermal with cosh(rho)/2 variance.
  EXPECT_TRUE(reduce_to_mode(local, 0).isApprox(0.5 * std::cosh(rho) * Eigen::Matrix2d::Identity(),
                                                1e-13));
  EXPECT_NEAR(mean_reduced_entropy(seed), oracle::g(0.5 * std::cosh(rho) - 0.5), 1e-12);
}

TEST(Seed, UnequalSqueezingEntanglesUses) {
  EXPECT_GT(mean_reduced_entropy(seed_of({{0.0, 0.4}, {0.0, -0.1}, {0.0, 1.0}})), 1e-3);
  // Equal squeezing in every mode is a product of identical local states.
  EXPECT_NEAR(mean_reduced_entropy(seed_of({{0.0, 0.4}, {0.0, 0.4}, {0.0, 0.4}})), 0.0, 1e-9);
}

TEST(Seed, BasisRoundTrip) {
  const SeedState seed = seed_of({{0.1, 0.4}, {0.3, -0.1}, {0.0, 1.0}});
  const GeneralCov back = to_global_basis(seed_local_covariance(seed), seed.basis);
  EXPECT_TRUE(back.matrix().isApprox(seed_global_covariance(seed).matrix(), 1e-13));
  SeedState bad = seed;
  bad.basis = omega_spectrum(2);
  EXPECT_THROW(seed_global_covariance(bad), std::invalid_argument);
}

TEST(Seed, OptimalSeedAtZeroMemoryIsVacuum) {
  const SeedState seed = optimal_classical_seed({10, 0.9, 0.0, 0.0, 8.0});
  EXPECT_NEAR(mean_reduced_entropy(seed), 0.0, 1e-8);
}

TEST(Seed, EntanglementGrowsAlongTheClosedFormCurve) {
  double prev = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const ChannelConfig cfg{10, 0.9, 0.1 * i, 0.0, 8.0};
    if (!classical_lower_analytic(cfg).valid) {
      break;
    }
    const double e = mean_reduced_entropy(optimal_classical_seed(cfg));
    EXPECT_GE(e, prev - 1e-9);
    prev = e;
  }
  EXPECT_GT(prev, 0.0);
}

TEST(Separability, Examples) {
  EXPECT_NEAR(env_ppt_eigenvalue(1.0, 0.0), std::exp(-1.0) / 2, 1e-12);
  EXPECT_NEAR(env_ppt_eigenvalue(0.0, 3.0), 3.5, 1e-12);
  EXPECT_FALSE(env_is_separable(1.0, 0.0));
  EXPECT_TRUE(env_is_separable(0.0, 3.0));
  EXPECT_THROW(env_ppt_eigenvalue(1.0, -0.5), std::invalid_argument);
}

TEST(Separability, MatchesExplicitPartialTranspose) {
  for (double s : {0.0, 0.5, -1.0, 2.0}) {
    for (double T : {0.0, 0.4, 3.0}) {
      EXPECT_NEAR(env_ppt_eigenvalue(s, T), ppt_oracle(s, T), 1e-10);
      EXPECT_NEAR(env_ppt_eigenvalue(s, T), (T + 0.5) * std::exp(-std::abs(s)), 1e-10);
    }
  }
}

TEST(Separability, BoundaryMatchesClosedForm) {
  const std::vector<double> s_grid{-2.0, 0.0, 0.3, 1.0, 2.5};
  const std::vector<double> T_grid{0.0, 1.0, 2.0};
  const SeparabilityScan scan = env_separability_scan(s_grid, T_grid);
  ASSERT_EQ(scan.grid.size(), 15u);
  ASSERT_EQ(scan.boundary.size(), 5u);
  for (const BoundaryPoint& b : scan.boundary) {
    EXPECT_NEAR(b.T, b.T_closed_form, 1e-9);
    EXPECT_NEAR(b.T_closed_form, 0.5 * (std::exp(std::abs(b.s)) - 1.0), 1e-14);
  }
  // s fastest.
  EXPECT_EQ(scan.grid[1].s, 0.0);
  EXPECT_EQ(scan.grid[1].T, 0.0);
  for (const SeparabilityPoint& p : scan.grid) {
    EXPECT_EQ(p.separable, p.T >= separability_boundary_temperature(p.s) - 1e-12);
  }
  EXPECT_THROW(env_separability_scan({}, T_grid), std::invalid_argument);
}

TEST(Separability, SymmetricInMemorySign) {
  for (double s : {0.3, 1.7}) {
    EXPECT_NEAR(env_ppt_eigenvalue(s, 0.6), env_ppt_eigenvalue(-s, 0.6), 1e-13);
    EXPECT_EQ(separability_boundary_temperature(s), separability_boundary_temperature(-s));
  }
}
