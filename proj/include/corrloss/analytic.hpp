// analytic.hpp: Closed-form capacity bounds, their optimal encodings and
// validity ranges, and the strong-memory asymptotics.

#pragma once

#include <span>
#include <vector>

#include "corrloss/channel.hpp"
#include "corrloss/optimizer.hpp"

namespace corrloss {

struct AnalyticBound {
  double value = 0.0;  // bits per channel use
  bool valid = true;   // closed-form optimum is feasible for every mode
  std::vector<ModeEncoding> per_mode;
};

// M(s, T) = (1/n) sum_k (T + 1/2) cosh(s_k) - 1/2. The mode-list overload
// uses each mode's own temperature.
double m_parameter(const ChannelConfig& cfg);
double m_parameter(std::span<const GlobalEnvMode> env);

// Optimal photon numbers N_j of the closed-form solutions.
std::vector<double> optimal_photons(std::span<const GlobalEnvMode> env, double eta, double N);

// Maximum output entropy bound g(eta N + (1 - eta) M). per_mode holds the
// entropy-maximizing seeds (no classical noise).
AnalyticBound classical_upper_bound(const ChannelConfig& cfg);
AnalyticBound classical_upper_bound(std::span<const GlobalEnvMode> env, double eta, double N);

// Holevo information at the closed-form optimum t = 0, r = s_j; valid while
// both noise variances are nonnegative.
AnalyticBound classical_lower_analytic(const ChannelConfig& cfg);
AnalyticBound classical_lower_analytic(std::span<const GlobalEnvMode> env, double eta, double N);

// Infinite-memory limit of the classical lower bound.
double classical_lower_asymptotic(int n, double N, double eta, double T);

// Coherent-state encoding per use against thermal noise T_eff(k), with the
// photon budget water-filled across uses.
double local_classical_lower(const ChannelConfig& cfg);

// Contribution of an unsqueezed (s_j = 0) global mode to the asymptotic
// quantum capacity.
double delta_term(double N, double eta, double T);

double asymptotic_quantum(int n, double N, double eta, double T);
double asymptotic_ent_assisted(int n, double N, double eta, double T);

}  // namespace corrloss
