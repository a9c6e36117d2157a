// channel.hpp: Lossy bosonic memory channel with a multimode squeezed
// thermal environment: Omega spectrum, local/global environment states,
// beam-splitter action and the passive-diagonalizable environment class.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "corrloss/gaussian.hpp"

namespace corrloss {

inline constexpr int kDefaultMaxModes = 64;

struct ChannelConfig {
  int n = 1;         // correlation length (channel uses per block)
  double eta = 1.0;  // transmissivity
  double s = 0.0;    // memory (multimode squeezing) parameter
  double T = 0.0;    // thermal excitations per environment mode
  double N = 0.0;    // mean input photons per use

  // Throws std::invalid_argument naming the offending field.
  void validate(int max_modes = kDefaultMaxModes) const;
};

// Eigen-decomposition of the symmetric coupling matrix Omega.
// vectors(k, j) is component k of eigenvector j (zero-based), so
// Omega = vectors * diag(lambda) * vectors^T.
struct OmegaSpectrum {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd vectors;

  int size() const { return static_cast<int>(lambda.size()); }
};

// Nearest-neighbour coupling: ones on the first off-diagonals.
Eigen::MatrixXd tridiagonal_omega(int n);

// lambda_j = 2 cos(pi j / (n+1)), v_{j,k} = sqrt(2/(n+1)) sin(j k pi / (n+1)).
OmegaSpectrum omega_spectrum(int n);

// Any user-supplied symmetric Omega; eigenvalues sorted descending.
OmegaSpectrum omega_spectrum(const Eigen::MatrixXd& omega);

// Environment mode j in the global basis: (T + 1/2) diag(e^s, e^-s).
struct GlobalEnvMode {
  int j = 0;
  double s = 0.0;
  double T = 0.0;

  double q_variance() const;
  double p_variance() const;
  SingleModeCov covariance() const { return {T, s}; }
};

std::vector<GlobalEnvMode> env_global_modes(const ChannelConfig& cfg);
std::vector<GlobalEnvMode> env_global_modes(const ChannelConfig& cfg,
                                            const OmegaSpectrum& spectrum);

// V = (T + 1/2) (e^{s Omega} (+) e^{-s Omega}), built from the spectrum.
GeneralCov env_local_covariance(const ChannelConfig& cfg);
GeneralCov env_local_covariance(const ChannelConfig& cfg, const OmegaSpectrum& spectrum);

// Passive change of basis x_global = (W^T (+) W^T) x_local, W = spectrum.vectors.
GeneralCov to_global_basis(const GeneralCov& local, const OmegaSpectrum& spectrum);
GeneralCov to_local_basis(const GeneralCov& global, const OmegaSpectrum& spectrum);

// Mean excitation of the k-th (zero-based) local environment mode.
double local_effective_temperature(const ChannelConfig& cfg, int k);
double local_effective_temperature(const ChannelConfig& cfg, const OmegaSpectrum& spectrum,
                                   int k);

// Same quantity through the even/odd cosh pairing of the tridiagonal spectrum.
double local_effective_temperature_paired(const ChannelConfig& cfg, int k);

std::vector<double> local_effective_temperatures(const ChannelConfig& cfg);

// Per-use thermal environments seen in the local scenario (s = 0, T_eff(k)).
std::vector<GlobalEnvMode> local_env_modes(const ChannelConfig& cfg);

// eta * sigma + (1 - eta) * V.
GeneralCov beamsplitter_output(const GeneralCov& sigma_in, const GeneralCov& env, double eta);

// Environment of the form O (D_Q (+) D_P) O^T with O = [[X, Y], [-Y, X]]
// orthogonal and symplectic.
struct PassiveEnvSpec {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  Eigen::VectorXd D_Q;
  Eigen::VectorXd D_P;

  int size() const { return static_cast<int>(X.rows()); }
};

class InvalidPassiveSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws InvalidPassiveSpec describing the first violated condition.
void validate(const PassiveEnvSpec& spec, double tolerance = 1e-10);

Eigen::MatrixXd passive_orthogonal(const PassiveEnvSpec& spec);
GeneralCov build_passive_env(const PassiveEnvSpec& spec);

// X = W, Y = 0, D_Q = (T + 1/2) e^{s_j}, D_P = (T + 1/2) e^{-s_j}.
PassiveEnvSpec passive_spec_from_config(const ChannelConfig& cfg);

// Diagonalizes V with O^T and reads off one squeezed thermal mode per
// diagonal pair: T_j + 1/2 = sqrt(q p), s_j = log(q / p) / 2.
std::vector<GlobalEnvMode> global_modes_from_passive(const PassiveEnvSpec& spec,
                                                     const GeneralCov& env);

}  // namespace corrloss
