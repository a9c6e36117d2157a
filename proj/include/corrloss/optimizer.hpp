// optimizer.hpp: Holevo, coherent and quantum mutual information of
// global-mode Gaussian encodings, and their constrained maximization.
//
// Each global mode j is encoded with a squeezed thermal seed
// (t_j + 1/2) diag(e^{r_j}, e^{-r_j}) displaced by Gaussian classical noise
// diag(c_{q,j}, c_{p,j}); N_j is the photon number the mode consumes:
//   (c_q + c_p) / 2 + (t + 1/2) cosh r = N_j + 1/2.

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "corrloss/allocation.hpp"
#include "corrloss/channel.hpp"

namespace corrloss {

enum class Quantity { Classical, Quantum, EntAssisted };

std::string_view to_string(Quantity q);

struct ModeEncoding {
  double t = 0.0;
  double r = 0.0;
  double c_q = 0.0;
  double c_p = 0.0;
  double N = 0.0;
};

struct EncodingParams {
  std::vector<ModeEncoding> modes;

  double mean_photons() const;
};

// Holevo information of one global mode. Throws std::invalid_argument when
// t < 0, a noise variance is negative, or the per-mode energy identity fails.
double holevo_chi(const ModeEncoding& enc, const GlobalEnvMode& env, double eta);

// Sum over modes (no 1/n normalization).
double holevo_chi(const EncodingParams& params, std::span<const GlobalEnvMode> env,
                  double eta);

// d chi / d(t, r, c_q, c_p), holding the other three fixed.
Eigen::Vector4d holevo_chi_gradient(const ModeEncoding& enc, const GlobalEnvMode& env,
                                    double eta);

// Output entropy minus entropy exchange for the seed (t, r); may be negative.
double coherent_information(double t, double r, const GlobalEnvMode& env, double eta);
Eigen::Vector2d coherent_information_gradient(double t, double r, const GlobalEnvMode& env,
                                              double eta);

// g(t) + coherent_information(t, r).
double quantum_mutual_information(double t, double r, const GlobalEnvMode& env, double eta);
Eigen::Vector2d quantum_mutual_information_gradient(double t, double r,
                                                    const GlobalEnvMode& env, double eta);

// Coherent information of an arbitrary single-mode input covariance, through
// an explicit purification and 4x4 symplectic spectra.
double coherent_information_general(const Eigen::Matrix2d& input, const GlobalEnvMode& env,
                                    double eta);

// Seed (t, r) rotated in phase space by phi, introducing q-p correlations.
double coherent_information_rotated(double t, double r, double phi, const GlobalEnvMode& env,
                                    double eta);

struct ModeSolverOptions {
  int scan_points = 17;
  int max_cycles = 50;
  double cycle_tolerance = 1e-14;
};

struct ModeSolution {
  ModeEncoding encoding;
  double value = 0.0;
  int evaluations = 0;
};

// Best value of one mode using at most N photons. Quantum values are floored
// at zero by idling the mode (t = 0 carries no coherent information).
ModeSolution maximize_mode(Quantity quantity, const GlobalEnvMode& env, double eta, double N,
                           const ModeSolverOptions& options = {});

struct RotatedModeSolution {
  double value = 0.0;
  double t = 0.0;
  double r = 0.0;
  double phi = 0.0;
};

// Coherent information maximized over (t, r, phi); compares against the
// diagonal-covariance restriction used by maximize_mode.
RotatedModeSolution maximize_mode_rotated_coherent(const GlobalEnvMode& env, double eta,
                                                   double N,
                                                   const ModeSolverOptions& options = {});

struct OptimizerOptions {
  ModeSolverOptions mode;
  AllocationOptions allocation;
};

struct OptResult {
  double value = 0.0;  // bits per channel use
  EncodingParams params;
  bool converged = true;
  int iterations = 0;  // per-mode solves
  std::optional<double> gap_to_analytic;
  double kkt_residual = 0.0;
  bool concave_allocation = true;
};

OptResult maximize(Quantity quantity, std::span<const GlobalEnvMode> env, double eta, double N,
                   const OptimizerOptions& options = {});

OptResult maximize_classical(const ChannelConfig& cfg, const OptimizerOptions& options = {});
OptResult maximize_classical(std::span<const GlobalEnvMode> env, double eta, double N,
                             const OptimizerOptions& options = {});

// eta < 1/2: anti-degradable, returns 0 without optimizing.
OptResult maximize_quantum(const ChannelConfig& cfg, const OptimizerOptions& options = {});
OptResult maximize_quantum(std::span<const GlobalEnvMode> env, double eta, double N,
                           const OptimizerOptions& options = {});

OptResult maximize_ent_assisted(const ChannelConfig& cfg, const OptimizerOptions& options = {});
OptResult maximize_ent_assisted(std::span<const GlobalEnvMode> env, double eta, double N,
                                const OptimizerOptions& options = {});

// Local scenario: per-use thermal environments at T_eff(k), product inputs.
OptResult maximize_quantum_local(const ChannelConfig& cfg, const OptimizerOptions& options = {});
OptResult maximize_ent_assisted_local(const ChannelConfig& cfg,
                                      const OptimizerOptions& options = {});

// Grid search over every free parameter (allocation and per-mode encodings)
// for n <= 2; a lower envelope of the true optimum. Bits per channel use.
double brute_force_oracle(const ChannelConfig& cfg, Quantity quantity);

}  // namespace corrloss
