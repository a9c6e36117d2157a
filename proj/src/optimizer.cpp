#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "corrloss/analytic.hpp"
#include "corrloss/optimizer.hpp"

namespace corrloss {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

// Modes sharing (T, |s|) have the same value function: s -> -s is the
// phase rotation q -> p, p -> -q, under which r -> -r and c_q <-> c_p.
struct ModeGroup {
  GlobalEnvMode representative;
  std::vector<std::size_t> members;
  std::map<double, ModeSolution> cache;
};

std::vector<ModeGroup> group_modes(std::span<const GlobalEnvMode> env) {
  std::vector<ModeGroup> groups;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double abs_s = std::abs(env[i].s);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const ModeGroup& g) {
      return close(g.representative.T, env[i].T) && close(g.representative.s, abs_s);
    });
    if (it == groups.end()) {
      groups.push_back({{env[i].j, abs_s, env[i].T}, {}, {}});
      it = groups.end() - 1;
    }
    it->members.push_back(i);
  }
  return groups;
}

ModeEncoding mirrored(ModeEncoding enc, bool flip) {
  if (flip) {
    enc.r = -enc.r;
    std::swap(enc.c_q, enc.c_p);
  }
  return enc;
}

void require_inputs(std::span<const GlobalEnvMode> env, double eta, double N) {
  if (env.empty()) {
    throw std::invalid_argument("maximize: no environment modes");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("maximize: eta must lie in [0, 1]");
  }
  if (!(N >= 0.0) || !std::isfinite(N)) {
    throw std::invalid_argument("maximize: N must be finite and >= 0");
  }
}

OptResult idle_result(Quantity quantity, std::size_t modes, double N) {
  OptResult out;
  ModeEncoding enc;
  if (quantity == Quantity::Classical) {
    enc = {0.0, 0.0, N, N, N};
  }
  out.params.modes.assign(modes, enc);
  return out;
}

}  // namespace

OptResult maximize(Quantity quantity, std::span<const GlobalEnvMode> env, double eta, double N,
                   const OptimizerOptions& options) {
  require_inputs(env, eta, N);
  if (eta == 0.0 || (quantity == Quantity::Quantum && eta < 0.5)) {
    return idle_result(quantity, env.size(), N);
  }

  std::vector<ModeGroup> groups = group_modes(env);
  OptResult out;
  auto solve = [&](ModeGroup& g, double x) -> const ModeSolution& {
    auto it = g.cache.find(x);
    if (it == g.cache.end()) {
      it = g.cache.emplace(x, maximize_mode(quantity, g.representative, eta, x, options.mode))
               .first;
      ++out.iterations;
    }
    return it->second;
  };

  std::vector<ModeValueFunction> fns;
  fns.reserve(groups.size());
  for (ModeGroup& g : groups) {
    fns.push_back({[&solve, &g](double x) { return solve(g, x).value; }, {},
                   static_cast<int>(g.members.size())});
  }
  const Allocation alloc = allocate_photons(fns, N, options.allocation);

  out.params.modes.resize(env.size());
  double total = 0.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const std::size_t size = groups[gi].members.size();
    const std::size_t active = static_cast<std::size_t>(alloc.active_members[gi]);
    const double per_active = alloc.photons[gi] * static_cast<double>(size) / active;
    for (std::size_t i = 0; i < size; ++i) {
      const ModeSolution& sol = solve(groups[gi], i < active ? per_active : 0.0);
      const std::size_t member = groups[gi].members[i];
      total += sol.value;
      out.params.modes[member] = mirrored(sol.encoding, env[member].s < 0.0);
    }
  }
  out.value = total / static_cast<double>(env.size());
  if (quantity == Quantity::Quantum) {
    out.value = std::max(out.value, 0.0);
  }
  out.converged = alloc.converged;
  out.kkt_residual = alloc.kkt_residual;
  out.concave_allocation = alloc.concave;

  if (quantity == Quantity::Classical) {
    const AnalyticBound analytic = classical_lower_analytic(env, eta, N);
    if (analytic.valid) {
      out.gap_to_analytic = out.value - analytic.value;
      // The closed-form point is feasible; keep it when the search fell short.
      if (analytic.value > out.value) {
        out.value = analytic.value;
        out.params.modes = analytic.per_mode;
      }
    }
  }
  return out;
}

OptResult maximize_classical(const ChannelConfig& cfg, const OptimizerOptions& options) {
  cfg.validate();
  return maximize(Quantity::Classical, env_global_modes(cfg), cfg.eta, cfg.N, options);
}

OptResult maximize_classical(std::span<const GlobalEnvMode> env, double eta, double N,
                             const OptimizerOptions& options) {
  return maximize(Quantity::Classical, env, eta, N, options);
}

OptResult maximize_quantum(const ChannelConfig& cfg, const OptimizerOptions& options) {
  cfg.validate();
  return maximize(Quantity::Quantum, env_global_modes(cfg), cfg.eta, cfg.N, options);
}

OptResult maximize_quantum(std::span<const GlobalEnvMode> env, double eta, double N,
                           const OptimizerOptions& options) {
  return maximize(Quantity::Quantum, env, eta, N, options);
}

OptResult maximize_ent_assisted(const ChannelConfig& cfg, const OptimizerOptions& options) {
  cfg.validate();
  return maximize(Quantity::EntAssisted, env_global_modes(cfg), cfg.eta, cfg.N, options);
}

OptResult maximize_ent_assisted(std::span<const GlobalEnvMode> env, double eta, double N,
                                const OptimizerOptions& options) {
  return maximize(Quantity::EntAssisted, env, eta, N, options);
}

OptResult maximize_quantum_local(const ChannelConfig& cfg, const OptimizerOptions& options) {
  cfg.validate();
  return maximize(Quantity::Quantum, local_env_modes(cfg), cfg.eta, cfg.N, options);
}

OptResult maximize_ent_assisted_local(const ChannelConfig& cfg,
                                      const OptimizerOptions& options) {
  cfg.validate();
  return maximize(Quantity::EntAssisted, local_env_modes(cfg), cfg.eta, cfg.N, options);
}

}  // namespace corrloss
