#include "corrloss/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrloss {

namespace {

constexpr double kRangeTolerance = 1e-12;

double mean_env_energy(std::span<const GlobalEnvMode> env) {
  double total = 0.0;
  for (const GlobalEnvMode& m : env) {
    total += (m.T + 0.5) * std::cosh(m.s);
  }
  return total / static_cast<double>(env.size());
}

void require_modes(std::span<const GlobalEnvMode> env) {
  if (env.empty()) {
    throw std::invalid_argument("analytic bound needs at least one mode");
  }
}

// Lossless or opaque channels: coherent states with isotropic modulation.
AnalyticBound trivial_bound(std::span<const GlobalEnvMode> env, double eta, double N) {
  AnalyticBound out;
  out.value = eta == 0.0 ? 0.0 : g_entropy(N);
  out.per_mode.assign(env.size(), ModeEncoding{0.0, 0.0, N, N, N});
  return out;
}

}  // namespace

double m_parameter(const ChannelConfig& cfg) {
  cfg.validate();
  const std::vector<GlobalEnvMode> env = env_global_modes(cfg);
  return m_parameter(env);
}

double m_parameter(std::span<const GlobalEnvMode> env) {
  require_modes(env);
  return mean_env_energy(env) - 0.5;
}

std::vector<double> optimal_photons(std::span<const GlobalEnvMode> env, double eta, double N) {
  require_modes(env);
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("optimal_photons: eta must lie in (0, 1]");
  }
  const double k = (1.0 - eta) / eta;
  const double mean = mean_env_energy(env);
  std::vector<double> photons(env.size());
  for (std::size_t j = 0; j < env.size(); ++j) {
    photons[j] = N - k * (env[j].T + 0.5) * std::cosh(env[j].s) + k * mean;
  }
  return photons;
}

AnalyticBound classical_upper_bound(const ChannelConfig& cfg) {
  cfg.validate();
  const std::vector<GlobalEnvMode> env = env_global_modes(cfg);
  return classical_upper_bound(env, cfg.eta, cfg.N);
}

AnalyticBound classical_upper_bound(std::span<const GlobalEnvMode> env, double eta, double N) {
  require_modes(env);
  if (eta == 0.0 || eta == 1.0) {
    AnalyticBound out = trivial_bound(env, eta, N);
    for (ModeEncoding& m : out.per_mode) {
      m = {N, 0.0, 0.0, 0.0, N};
    }
    return out;
  }
  const double k = (1.0 - eta) / eta;
  AnalyticBound out;
  out.value = g_entropy(eta * N + (1.0 - eta) * m_parameter(env));
  const std::vector<double> photons = optimal_photons(env, eta, N);
  out.per_mode.resize(env.size());
  for (std::size_t j = 0; j < env.size(); ++j) {
    const double shift = k * (env[j].T + 0.5) * std::sinh(env[j].s);
    // (t + 1/2) e^{+-r} = N_j + 1/2 -+ shift
    const double plus = photons[j] + 0.5 - shift;
    const double minus = photons[j] + 0.5 + shift;
    const bool positive = plus > 0.0 && minus > 0.0;
    const bool in_range = photons[j] >= -kRangeTolerance && positive &&
                          plus * minus >= 0.25 - kRangeTolerance;
    out.valid = out.valid && in_range;
    ModeEncoding& m = out.per_mode[j];
    m.N = photons[j];
    m.t = std::sqrt(std::max(plus * minus, 0.0)) - 0.5;
    m.r = positive ? 0.5 * std::log(plus / minus) : 0.0;
  }
  return out;
}

AnalyticBound classical_lower_analytic(const ChannelConfig& cfg) {
  cfg.validate();
  const std::vector<GlobalEnvMode> env = env_global_modes(cfg);
  return classical_lower_analytic(env, cfg.eta, cfg.N);
}

AnalyticBound classical_lower_analytic(std::span<const GlobalEnvMode> env, double eta,
                                       double N) {
  require_modes(env);
  if (eta == 0.0 || eta == 1.0) {
    return trivial_bound(env, eta, N);
  }
  const double k = (1.0 - eta) / eta;
  AnalyticBound out;
  double noise_entropy = 0.0;
  for (const GlobalEnvMode& m : env) {
    noise_entropy += g_entropy((1.0 - eta) * m.T);
  }
  noise_entropy /= static_cast<double>(env.size());
  out.value = g_entropy(eta * N + (1.0 - eta) * m_parameter(env)) - noise_entropy;

  const std::vector<double> photons = optimal_photons(env, eta, N);
  out.per_mode.resize(env.size());
  for (std::size_t j = 0; j < env.size(); ++j) {
    const double s = env[j].s;
    const double shift = k * (env[j].T + 0.5) * std::sinh(s);
    ModeEncoding& m = out.per_mode[j];
    m.N = photons[j];
    m.t = 0.0;
    m.r = s;
    m.c_q = photons[j] + 0.5 - 0.5 * std::exp(s) - shift;
    m.c_p = photons[j] + 0.5 - 0.5 * std::exp(-s) + shift;
    out.valid = out.valid && photons[j] >= -kRangeTolerance && m.c_q >= -kRangeTolerance &&
                m.c_p >= -kRangeTolerance;
  }
  return out;
}

double classical_lower_asymptotic(int n, double N, double eta, double T) {
  if (n < 1) {
    throw std::invalid_argument("classical_lower_asymptotic: n must be >= 1");
  }
  const double per_squeezed_mode = std::log2(2.0 * N + 1.0);
  if (n % 2 == 0) {
    return per_squeezed_mode;
  }
  const double unsqueezed = g_entropy(eta * N + (1.0 - eta) * T) - g_entropy((1.0 - eta) * T);
  return (n - 1.0) / n * per_squeezed_mode + unsqueezed / n;
}

double local_classical_lower(const ChannelConfig& cfg) {
  cfg.validate();
  const double eta = cfg.eta;
  if (eta == 0.0) {
    return 0.0;
  }
  const std::vector<double> temps = local_effective_temperatures(cfg);
  std::vector<ModeValueFunction> fns;
  fns.reserve(temps.size());
  for (double temp : temps) {
    const double noise = (1.0 - eta) * std::max(temp, 0.0);
    const double floor_entropy = g_entropy(noise);
    fns.push_back({[=](double x) { return g_entropy(eta * x + noise) - floor_entropy; },
                   [=](double x) {
                     return eta * g_entropy_derivative(std::max(eta * x + noise, 1e-300));
                   },
                   1});
  }
  const Allocation alloc = allocate_photons(fns, cfg.N);
  return alloc.total_value / cfg.n;
}

double delta_term(double N, double eta, double T) {
  if (!(N >= 0.0) || !(eta >= 0.0 && eta <= 1.0) || !(T >= 0.0)) {
    throw std::invalid_argument("delta_term: parameters out of range");
  }
  const double n_out = eta * N + (1.0 - eta) * T;
  const double radicand = (N + n_out + 1.0) * (N + n_out + 1.0) - 4.0 * eta * N * (N + 1.0);
  if (radicand < 0.0) {
    throw std::logic_error("delta_term: negative radicand");
  }
  const double d = std::sqrt(radicand);
  auto g_clamped = [](double x) { return g_entropy(std::max(x, 0.0)); };
  return g_entropy(n_out) - g_clamped(0.5 * (d + n_out - N - 1.0)) -
         g_clamped(0.5 * (d - n_out + N - 1.0));
}

double asymptotic_quantum(int n, double N, double eta, double T) {
  if (n < 1) {
    throw std::invalid_argument("asymptotic_quantum: n must be >= 1");
  }
  if (eta < 0.5 || n % 2 == 0) {
    return 0.0;
  }
  return std::max(delta_term(N, eta, T), 0.0) / n;
}

double asymptotic_ent_assisted(int n, double N, double eta, double T) {
  if (n < 1) {
    throw std::invalid_argument("asymptotic_ent_assisted: n must be >= 1");
  }
  if (n % 2 == 0) {
    return g_entropy(N);
  }
  return g_entropy(N) + delta_term(N, eta, T) / n;
}

}  // namespace corrloss
