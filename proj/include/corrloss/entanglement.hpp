// entanglement.hpp: Entanglement of the optimal seed across channel uses and
// separability of the two-use environment.

#pragma once

#include <span>
#include <vector>

#include "corrloss/channel.hpp"
#include "corrloss/gaussian.hpp"
#include "corrloss/optimizer.hpp"

namespace corrloss {

// Product of squeezed thermal seeds (t_j, r_j) in the global basis; only t
// and r of each mode are used.
struct SeedState {
  EncodingParams params;
  OmegaSpectrum basis;
};

// Seed of the numerically optimal classical encoding at cfg.
SeedState optimal_classical_seed(const ChannelConfig& cfg, const OptimizerOptions& options = {});

GeneralCov seed_global_covariance(const SeedState& seed);
GeneralCov seed_local_covariance(const SeedState& seed);

// Arithmetic mean of the single-use marginal entropies of the seed. For a
// pure seed this is the mean entanglement across the 1:(n-1) cuts.
double mean_reduced_entropy(const SeedState& seed);

// Two-use environment (n = 2) at (s, T).
double env_ppt_eigenvalue(double s, double T);
bool env_is_separable(double s, double T);

// T at which the two-use environment turns separable: (e^{|s|} - 1) / 2.
double separability_boundary_temperature(double s);

struct SeparabilityPoint {
  double s = 0.0;
  double T = 0.0;
  double nu_tilde = 0.0;  // smallest partially transposed symplectic eigenvalue
  bool separable = false;
};

struct BoundaryPoint {
  double s = 0.0;
  double T = 0.0;              // zero of nu_tilde - 1/2 found numerically
  double T_closed_form = 0.0;
};

struct SeparabilityScan {
  std::vector<SeparabilityPoint> grid;     // s fastest
  std::vector<BoundaryPoint> boundary;     // one per s
};

SeparabilityScan env_separability_scan(std::span<const double> s_grid,
                                       std::span<const double> T_grid);

}  // namespace corrloss
