#include "corrloss/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace corrloss {

namespace {

Eigen::MatrixXd block_orthogonal(const Eigen::MatrixXd& w) {
  const auto n = w.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = w;
  out.bottomRightCorner(n, n) = w;
  return out;
}

void require_mode_index(int k, int n) {
  if (k < 0 || k >= n) {
    throw std::out_of_range("mode index " + std::to_string(k) + " out of range for n = " +
                            std::to_string(n));
  }
}

}  // namespace

void ChannelConfig::validate(int max_modes) const {
  if (n < 1) {
    throw std::invalid_argument("n must be >= 1");
  }
  if (n > max_modes) {
    throw std::invalid_argument("n = " + std::to_string(n) + " exceeds the limit of " +
                                std::to_string(max_modes));
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
  if (!(T >= 0.0)) {
    throw std::invalid_argument("T must be >= 0");
  }
  if (!(N >= 0.0)) {
    throw std::invalid_argument("N must be >= 0");
  }
  if (!std::isfinite(s)) {
    throw std::invalid_argument("s must be finite");
  }
}

Eigen::MatrixXd tridiagonal_omega(int n) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = 1.0;
  }
  return omega;
}

OmegaSpectrum omega_spectrum(int n) {
  if (n < 1) {
    throw std::invalid_argument("omega_spectrum: n must be >= 1");
  }
  OmegaSpectrum spec;
  spec.lambda.resize(n);
  spec.vectors.resize(n, n);
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int j = 1; j <= n; ++j) {
    spec.lambda(j - 1) = 2.0 * std::cos(std::numbers::pi * j / (n + 1));
    for (int k = 1; k <= n; ++k) {
      spec.vectors(k - 1, j - 1) = norm * std::sin(std::numbers::pi * j * k / (n + 1));
    }
  }
  return spec;
}

OmegaSpectrum omega_spectrum(const Eigen::MatrixXd& omega) {
  if (omega.rows() != omega.cols() || omega.rows() == 0) {
    throw std::invalid_argument("omega must be square and nonempty");
  }
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("omega must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(omega);
  const auto n = omega.rows();
  OmegaSpectrum spec;
  spec.lambda = solver.eigenvalues().reverse();
  spec.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < n; ++j) {
    // Sign convention: largest-magnitude component positive.
    Eigen::Index pivot = 0;
    spec.vectors.col(j).cwiseAbs().maxCoeff(&pivot);
    if (spec.vectors(pivot, j) < 0.0) {
      spec.vectors.col(j) *= -1.0;
    }
  }
  return spec;
}

double GlobalEnvMode::q_variance() const { return (T + 0.5) * std::exp(s); }
double GlobalEnvMode::p_variance() const { return (T + 0.5) * std::exp(-s); }

std::vector<GlobalEnvMode> env_global_modes(const ChannelConfig& cfg) {
  return env_global_modes(cfg, omega_spectrum(cfg.n));
}

std::vector<GlobalEnvMode> env_global_modes(const ChannelConfig& cfg,
                                            const OmegaSpectrum& spectrum) {
  std::vector<GlobalEnvMode> modes(spectrum.size());
  for (int j = 0; j < spectrum.size(); ++j) {
    modes[j] = {j, cfg.s * spectrum.lambda(j), cfg.T};
  }
  return modes;
}

GeneralCov env_local_covariance(const ChannelConfig& cfg) {
  return env_local_covariance(cfg, omega_spectrum(cfg.n));
}

GeneralCov env_local_covariance(const ChannelConfig& cfg, const OmegaSpectrum& spectrum) {
  const int n = spectrum.size();
  const Eigen::MatrixXd& w = spectrum.vectors;
  const Eigen::VectorXd up = (cfg.s * spectrum.lambda).array().exp();
  const Eigen::VectorXd down = (-cfg.s * spectrum.lambda).array().exp();

  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  v.topLeftCorner(n, n) = (cfg.T + 0.5) * w * up.asDiagonal() * w.transpose();
  v.bottomRightCorner(n, n) = (cfg.T + 0.5) * w * down.asDiagonal() * w.transpose();
  return GeneralCov(std::move(v));
}

GeneralCov to_global_basis(const GeneralCov& local, const OmegaSpectrum& spectrum) {
  if (local.modes() != spectrum.size()) {
    throw std::invalid_argument("to_global_basis: dimension mismatch");
  }
  const Eigen::MatrixXd o = block_orthogonal(spectrum.vectors);
  return GeneralCov(o.transpose() * local.matrix() * o);
}

GeneralCov to_local_basis(const GeneralCov& global, const OmegaSpectrum& spectrum) {
  if (global.modes() != spectrum.size()) {
    throw std::invalid_argument("to_local_basis: dimension mismatch");
  }
  const Eigen::MatrixXd o = block_orthogonal(spectrum.vectors);
  return GeneralCov(o * global.matrix() * o.transpose());
}

double local_effective_temperature(const ChannelConfig& cfg, int k) {
  return local_effective_temperature(cfg, omega_spectrum(cfg.n), k);
}

double local_effective_temperature(const ChannelConfig& cfg, const OmegaSpectrum& spectrum,
                                   int k) {
  require_mode_index(k, spectrum.size());
  double sum = 0.0;
  for (int j = 0; j < spectrum.size(); ++j) {
    const double v = spectrum.vectors(k, j);
    sum += v * v * std::exp(cfg.s * spectrum.lambda(j));
  }
  return (cfg.T + 0.5) * sum - 0.5;
}

double local_effective_temperature_paired(const ChannelConfig& cfg, int k) {
  require_mode_index(k, cfg.n);
  const OmegaSpectrum spectrum = omega_spectrum(cfg.n);
  const int n = cfg.n;
  double sum = 0.0;
  for (int j = 0; j < n / 2; ++j) {
    const double v = spectrum.vectors(k, j);
    sum += v * v * std::cosh(cfg.s * spectrum.lambda(j));
  }
  double out = (2.0 * cfg.T + 1.0) * sum - 0.5;
  if (n % 2 == 1) {
    // The unsqueezed middle mode (lambda = 0) keeps its thermal weight T + 1/2.
    const double v = spectrum.vectors(k, n / 2);
    out += (cfg.T + 0.5) * v * v;
  }
  return out;
}

std::vector<double> local_effective_temperatures(const ChannelConfig& cfg) {
  const OmegaSpectrum spectrum = omega_spectrum(cfg.n);
  std::vector<double> out(cfg.n);
  for (int k = 0; k < cfg.n; ++k) {
    out[k] = local_effective_temperature(cfg, spectrum, k);
  }
  return out;
}

std::vector<GlobalEnvMode> local_env_modes(const ChannelConfig& cfg) {
  const std::vector<double> temps = local_effective_temperatures(cfg);
  std::vector<GlobalEnvMode> out(temps.size());
  for (std::size_t k = 0; k < temps.size(); ++k) {
    out[k] = {static_cast<int>(k), 0.0, std::max(temps[k], 0.0)};
  }
  return out;
}

GeneralCov beamsplitter_output(const GeneralCov& sigma_in, const GeneralCov& env, double eta) {
  if (sigma_in.modes() != env.modes()) {
    throw std::invalid_argument("beamsplitter_output: dimension mismatch");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("beamsplitter_output: eta must lie in [0, 1]");
  }
  return GeneralCov(eta * sigma_in.matrix() + (1.0 - eta) * env.matrix());
}

void validate(const PassiveEnvSpec& spec, double tolerance) {
  const auto n = spec.X.rows();
  if (n == 0 || spec.X.cols() != n || spec.Y.rows() != n || spec.Y.cols() != n ||
      spec.D_Q.size() != n || spec.D_P.size() != n) {
    throw InvalidPassiveSpec("X, Y must be n x n and D_Q, D_P of length n");
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd& x = spec.X;
  const Eigen::MatrixXd& y = spec.Y;
  if ((x * x.transpose() + y * y.transpose() - identity).cwiseAbs().maxCoeff() > tolerance) {
    throw InvalidPassiveSpec("X X^T + Y Y^T != I");
  }
  if ((x * y.transpose() - y * x.transpose()).cwiseAbs().maxCoeff() > tolerance) {
    throw InvalidPassiveSpec("X Y^T - Y X^T != 0");
  }
  if ((spec.D_Q.array() <= 0.0).any() || (spec.D_P.array() <= 0.0).any()) {
    throw InvalidPassiveSpec("D_Q and D_P must be positive");
  }
  if ((spec.D_Q.array() * spec.D_P.array() < 0.25 - tolerance).any()) {
    throw InvalidPassiveSpec("D_Q D_P >= I/4 violated");
  }
}

Eigen::MatrixXd passive_orthogonal(const PassiveEnvSpec& spec) {
  const auto n = spec.X.rows();
  Eigen::MatrixXd o(2 * n, 2 * n);
  o << spec.X, spec.Y, -spec.Y, spec.X;
  return o;
}

GeneralCov build_passive_env(const PassiveEnvSpec& spec) {
  validate(spec);
  const Eigen::MatrixXd& x = spec.X;
  const Eigen::MatrixXd& y = spec.Y;
  const auto dq = spec.D_Q.asDiagonal();
  const auto dp = spec.D_P.asDiagonal();
  const auto n = x.rows();

  Eigen::MatrixXd v(2 * n, 2 * n);
  v.topLeftCorner(n, n) = x * dq * x.transpose() + y * dp * y.transpose();
  v.topRightCorner(n, n) = y * dp * x.transpose() - x * dq * y.transpose();
  v.bottomLeftCorner(n, n) = x * dp * y.transpose() - y * dq * x.transpose();
  v.bottomRightCorner(n, n) = x * dp * x.transpose() + y * dq * y.transpose();
  return GeneralCov(std::move(v));
}

PassiveEnvSpec passive_spec_from_config(const ChannelConfig& cfg) {
  const OmegaSpectrum spectrum = omega_spectrum(cfg.n);
  PassiveEnvSpec spec;
  spec.X = spectrum.vectors;
  spec.Y = Eigen::MatrixXd::Zero(cfg.n, cfg.n);
  spec.D_Q = (cfg.T + 0.5) * (cfg.s * spectrum.lambda).array().exp();
  spec.D_P = (cfg.T + 0.5) * (-cfg.s * spectrum.lambda).array().exp();
  return spec;
}

std::vector<GlobalEnvMode> global_modes_from_passive(const PassiveEnvSpec& spec,
                                                     const GeneralCov& env) {
  validate(spec);
  const int n = spec.size();
  if (env.modes() != n) {
    throw std::invalid_argument("global_modes_from_passive: dimension mismatch");
  }
  const Eigen::MatrixXd o = passive_orthogonal(spec);
  const Eigen::MatrixXd d = o.transpose() * env.matrix() * o;

  std::vector<GlobalEnvMode> modes(n);
  for (int j = 0; j < n; ++j) {
    const double q = d(j, j);
    const double p = d(n + j, n + j);
    if (!(q > 0.0 && p > 0.0)) {
      throw UnphysicalStateError("passive environment has a non-positive diagonal entry");
    }
    modes[j] = {j, 0.5 * std::log(q / p), std::max(std::sqrt(q * p) - 0.5, 0.0)};
  }
  return modes;
}

}  // namespace corrloss
