#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "corrloss/channel.hpp"
#include "corrloss/gaussian.hpp"
#include "oracles.hpp"

using namespace corrloss;

TEST(ChannelConfig, Validation) {
  EXPECT_NO_THROW((ChannelConfig{10, 0.9, 1.0, 0.0, 8.0}.validate()));
  EXPECT_THROW((ChannelConfig{0, 0.9, 1.0, 0.0, 8.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ChannelConfig{65, 0.9, 1.0, 0.0, 8.0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((ChannelConfig{65, 0.9, 1.0, 0.0, 8.0}.validate(128)));
  EXPECT_THROW((ChannelConfig{2, 1.1, 1.0, 0.0, 8.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ChannelConfig{2, 0.9, 1.0, -1.0, 8.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ChannelConfig{2, 0.9, 1.0, 0.0, -8.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ChannelConfig{2, 0.9, INFINITY, 0.0, 8.0}.validate()), std::invalid_argument);
}

TEST(OmegaSpectrum, SmallExamples) {
  const OmegaSpectrum two = omega_spectrum(2);
  EXPECT_NEAR(two.lambda(0), 1.0, 1e-15);
  EXPECT_NEAR(two.lambda(1), -1.0, 1e-15);
  EXPECT_NEAR(two.vectors(0, 0), 1.0 / std::numbers::sqrt2, 1e-15);
  const OmegaSpectrum three = omega_spectrum(3);
  EXPECT_NEAR(three.lambda(0), std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(three.lambda(1), 0.0, 1e-15);
  EXPECT_NEAR(three.lambda(2), -std::numbers::sqrt2, 1e-15);
  EXPECT_THROW(omega_spectrum(0), std::invalid_argument);
}

TEST(OmegaSpectrum, MatchesDenseEigensolver) {
  for (int n = 1; n <= 50; ++n) {
    const OmegaSpectrum spec = omega_spectrum(n);
    const Eigen::MatrixXd omega = oracle::tridiagonal(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(omega);
    for (int j = 0; j < n; ++j) {
      // Dense eigenvalues ascend, ours descend.
      EXPECT_NEAR(spec.lambda(j), dense.eigenvalues()(n - 1 - j), 1e-12) << "n=" << n;
    }
    EXPECT_LT((spec.vectors.transpose() * spec.vectors -
               Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((omega * spec.vectors - spec.vectors * spec.lambda.asDiagonal())
                  .cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OmegaSpectrum, GeneralSymmetricCoupling) {
  Eigen::MatrixXd omega(3, 3);
  omega << 0.0, 2.0, 0.5, 2.0, 1.0, 0.0, 0.5, 0.0, -1.0;
  const OmegaSpectrum spec = omega_spectrum(omega);
  EXPECT_LT((spec.vectors * spec.lambda.asDiagonal() * spec.vectors.transpose() - omega)
                .cwiseAbs().maxCoeff(), 1e-12);
  for (int j = 0; j + 1 < 3; ++j) {
    EXPECT_GE(spec.lambda(j), spec.lambda(j + 1));
  }
  omega(0, 1) = 1.0;
  EXPECT_THROW(omega_spectrum(omega), std::invalid_argument);
}

TEST(GlobalEnvModes, SqueezingParameters) {
  const auto two = env_global_modes({2, 0.9, 1.0, 0.0, 8.0});
  EXPECT_NEAR(two[0].s, 1.0, 1e-15);
  EXPECT_NEAR(two[1].s, -1.0, 1e-15);
  for (const GlobalEnvMode& m : env_global_modes({5, 0.9, 0.0, 2.0, 8.0})) {
    EXPECT_EQ(m.s, 0.0);
    EXPECT_EQ(m.T, 2.0);
  }
  const auto three = env_global_modes({3, 0.9, 2.0, 0.0, 8.0});
  EXPECT_NEAR(three[0].s, 2.0 * std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(three[1].s, 0.0, 1e-15);
  EXPECT_NEAR(three[2].s, -2.0 * std::numbers::sqrt2, 1e-14);
}

TEST(EnvCovariance, MatchesMatrixExponential) {
  for (int n : {1, 2, 3, 6, 10}) {
    for (double s : {0.0, 0.3, -1.2, 2.5}) {
      for (double T : {0.0, 1.5}) {
        const GeneralCov v = env_local_covariance({n, 0.9, s, T, 8.0});
        const Eigen::MatrixXd ref = oracle::env_covariance(n, s, T);
        EXPECT_LT((v.matrix() - ref).cwiseAbs().maxCoeff(), 1e-11 * ref.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST(EnvCovariance, Examples) {
  const GeneralCov memoryless = env_local_covariance({4, 0.9, 0.0, 2.0, 8.0});
  EXPECT_TRUE(memoryless.matrix().isApprox(2.5 * Eigen::MatrixXd::Identity(8, 8), 1e-15));
  const GeneralCov v = env_local_covariance({2, 0.9, 1.0, 0.0, 8.0});
  Eigen::Matrix2d q;
  q << std::cosh(1.0), std::sinh(1.0), std::sinh(1.0), std::cosh(1.0);
  EXPECT_LT((v.matrix().topLeftCorner(2, 2) - 0.5 * q).cwiseAbs().maxCoeff(), 1e-14);
  for (int n : {2, 5, 10}) {
    for (double T : {0.0, 0.7}) {
      for (double nu : symplectic_eigenvalues(env_local_covariance({n, 0.9, 1.3, T, 8.0}))) {
        EXPECT_NEAR(nu, T + 0.5, 1e-9);
      }
    }
  }
}

TEST(EnvCovariance, GlobalBasisIsBlockDiagonal) {
  const ChannelConfig cfg{6, 0.9, 0.8, 0.4, 8.0};
  const OmegaSpectrum spec = omega_spectrum(cfg.n);
  const GeneralCov global = to_global_basis(env_local_covariance(cfg), spec);
  const auto modes = env_global_modes(cfg);
  const Eigen::MatrixXd& m = global.matrix();
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      if (i == j) {
        continue;
      }
      EXPECT_NEAR(m(i, j), 0.0, 1e-13);
    }
  }
  for (int j = 0; j < cfg.n; ++j) {
    EXPECT_NEAR(m(j, j), modes[j].q_variance(), 1e-12);
    EXPECT_NEAR(m(cfg.n + j, cfg.n + j), modes[j].p_variance(), 1e-12);
  }
  const GeneralCov back = to_local_basis(global, spec);
  EXPECT_TRUE(back.matrix().isApprox(env_local_covariance(cfg).matrix(), 1e-13));
  EXPECT_NEAR(global.matrix().trace(), env_local_covariance(cfg).matrix().trace(), 1e-11);
  EXPECT_THROW(to_global_basis(GeneralCov::vacuum(2), spec), std::invalid_argument);
}

TEST(EffectiveTemperature, Examples) {
  EXPECT_NEAR(local_effective_temperature({5, 0.9, 0.0, 1.3, 8.0}, 2), 1.3, 1e-14);
  const double expected = std::cosh(1.0) / 2 - 0.5;
  EXPECT_NEAR(local_effective_temperature({2, 0.9, 1.0, 0.0, 8.0}, 0), expected, 1e-14);
  EXPECT_NEAR(local_effective_temperature({2, 0.9, 1.0, 0.0, 8.0}, 1), expected, 1e-14);
  EXPECT_THROW(local_effective_temperature({2, 0.9, 1.0, 0.0, 8.0}, 2), std::out_of_range);
}

TEST(EffectiveTemperature, MarginalOfExplicitCovariance) {
  for (int n : {2, 3, 7, 10}) {
    const ChannelConfig cfg{n, 0.9, 1.1, 0.6, 8.0};
    const Eigen::MatrixXd ref = oracle::env_covariance(n, cfg.s, cfg.T);
    const std::vector<double> temps = local_effective_temperatures(cfg);
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(temps[k], ref(k, k) - 0.5, 1e-11);
      // The p marginal has the same variance.
      EXPECT_NEAR(temps[k], ref(n + k, n + k) - 0.5, 1e-11);
    }
  }
}

TEST(EffectiveTemperature, PairedFormAgrees) {
  for (int n : {1, 2, 3, 4, 9, 10, 11}) {
    for (double s : {0.0, 0.5, -2.0}) {
      for (double T : {0.0, 2.0}) {
        const ChannelConfig cfg{n, 0.9, s, T, 8.0};
        for (int k = 0; k < n; ++k) {
          EXPECT_NEAR(local_effective_temperature_paired(cfg, k),
                      local_effective_temperature(cfg, k), 1e-12)
              << "n=" << n << " k=" << k;
        }
      }
    }
  }
}

TEST(EffectiveTemperature, GrowsWithMemory) {
  for (int n : {2, 3, 10}) {
    for (double T : {0.0, 1.0}) {
      std::vector<double> prev = local_effective_temperatures({n, 0.9, 0.0, T, 8.0});
      for (int i = 1; i <= 40; ++i) {
        const double s = 0.1 * i;
        const std::vector<double> cur = local_effective_temperatures({n, 0.9, s, T, 8.0});
        const std::vector<double> mirror = local_effective_temperatures({n, 0.9, -s, T, 8.0});
        for (int k = 0; k < n; ++k) {
          EXPECT_GE(cur[k], prev[k] - 1e-12);
          EXPECT_GE(cur[k], T - 1e-12);
          EXPECT_NEAR(cur[k], mirror[k], 1e-10);
          // Reflection k -> n-1-k.
          EXPECT_NEAR(cur[k], cur[n - 1 - k], 1e-10);
        }
        prev = cur;
      }
    }
  }
}

TEST(LocalEnvModes, ThermalPerUse) {
  const ChannelConfig cfg{4, 0.9, 0.7, 0.2, 8.0};
  const auto modes = local_env_modes(cfg);
  ASSERT_EQ(modes.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(modes[k].s, 0.0);
    EXPECT_NEAR(modes[k].T, local_effective_temperature(cfg, k), 1e-15);
  }
}

TEST(Beamsplitter, Limits) {
  const GeneralCov in(SingleModeCov{1.0, 0.7}.matrix());
  const GeneralCov env(SingleModeCov{2.0, -0.4}.matrix());
  EXPECT_TRUE(beamsplitter_output(in, env, 1.0).matrix().isApprox(in.matrix()));
  EXPECT_TRUE(beamsplitter_output(in, env, 0.0).matrix().isApprox(env.matrix()));
  const GeneralCov vac = GeneralCov::vacuum(2);
  EXPECT_TRUE(beamsplitter_output(vac, vac, 0.5).matrix().isApprox(vac.matrix()));
  EXPECT_THROW(beamsplitter_output(in, vac, 0.5), std::invalid_argument);
  EXPECT_THROW(beamsplitter_output(in, env, 1.5), std::invalid_argument);
}

TEST(PassiveEnv, ThermalProduct) {
  PassiveEnvSpec spec{Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Zero(3, 3),
                      Eigen::VectorXd::Constant(3, 1.5), Eigen::VectorXd::Constant(3, 1.5)};
  EXPECT_TRUE(build_passive_env(spec).matrix().isApprox(1.5 * Eigen::MatrixXd::Identity(6, 6)));
}

TEST(PassiveEnv, ReproducesCorrelatedEnvironment) {
  for (int n : {2, 3, 10}) {
    for (double s : {0.0, 0.9, -1.7}) {
      const ChannelConfig cfg{n, 0.9, s, 0.8, 8.0};
      const GeneralCov built = build_passive_env(passive_spec_from_config(cfg));
      EXPECT_LT((built.matrix() - env_local_covariance(cfg).matrix()).cwiseAbs().maxCoeff(),
                1e-12);
      const auto from_passive = global_modes_from_passive(passive_spec_from_config(cfg), built);
      const auto direct = env_global_modes(cfg);
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(from_passive[j].s, direct[j].s, 1e-12);
        EXPECT_NEAR(from_passive[j].T, direct[j].T, 1e-12);
      }
    }
  }
}

TEST(PassiveEnv, RandomPassiveRoundTrip) {
  std::mt19937 rng(3);
  std::normal_distribution<double> n01;
  const int n = 5;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      z(i, j) = {n01(rng), n01(rng)};
    }
  }
  const Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
  PassiveEnvSpec spec;
  spec.X = u.real();
  spec.Y = u.imag();
  spec.D_Q = Eigen::VectorXd(n);
  spec.D_P = Eigen::VectorXd(n);
  std::vector<double> t{0.0, 0.3, 1.0, 2.2, 0.1};
  std::vector<double> r{0.5, -1.0, 0.0, 2.0, -0.2};
  for (int j = 0; j < n; ++j) {
    spec.D_Q(j) = (t[j] + 0.5) * std::exp(r[j]);
    spec.D_P(j) = (t[j] + 0.5) * std::exp(-r[j]);
  }
  ASSERT_NO_THROW(validate(spec));
  const GeneralCov env = build_passive_env(spec);
  const auto modes = global_modes_from_passive(spec, env);
  for (int j = 0; j < n; ++j) {
    EXPECT_NEAR(modes[j].s, r[j], 1e-10);
    EXPECT_NEAR(modes[j].T, t[j], 1e-10);
  }
}

TEST(PassiveEnv, Validation) {
  PassiveEnvSpec good{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 2),
                      Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Constant(2, 0.5)};
  EXPECT_NO_THROW(validate(good));
  PassiveEnvSpec bad = good;
  bad.X(0, 0) = 0.9;
  EXPECT_THROW(validate(bad), InvalidPassiveSpec);
  bad = good;
  bad.Y(0, 1) = 0.3;
  EXPECT_THROW(validate(bad), InvalidPassiveSpec);
  bad = good;
  bad.D_Q(1) = 0.2;
  EXPECT_THROW(validate(bad), InvalidPassiveSpec);
  bad = good;
  bad.D_P(0) = -1.0;
  EXPECT_THROW(validate(bad), InvalidPassiveSpec);
  bad = good;
  bad.D_P.resize(3);
  EXPECT_THROW(validate(bad), InvalidPassiveSpec);
  EXPECT_THROW(global_modes_from_passive(good, GeneralCov::vacuum(3)), std::invalid_argument);
}
