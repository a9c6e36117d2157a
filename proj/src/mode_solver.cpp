#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include "corrloss/mode_functions.hpp"
#include "corrloss/optimizer.hpp"
#include "line_search.hpp"

namespace corrloss {

namespace {

using AD4 = Eigen::AutoDiffScalar<Eigen::Vector4d>;
using AD2 = Eigen::AutoDiffScalar<Eigen::Vector2d>;

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
}

void require_encoding(const ModeEncoding& enc) {
  constexpr double tol = 1e-12;
  if (enc.t < -tol) {
    throw std::invalid_argument("encoding contract: t < 0");
  }
  if (enc.c_q < -tol || enc.c_p < -tol) {
    throw std::invalid_argument("encoding contract: negative classical noise variance");
  }
  const double energy = 0.5 * (enc.c_q + enc.c_p) + (enc.t + 0.5) * std::cosh(enc.r);
  if (std::abs(energy - (enc.N + 0.5)) > 1e-9 * (1.0 + enc.N)) {
    throw std::invalid_argument("encoding contract: energy identity violated (" +
                                std::to_string(energy) + " vs " +
                                std::to_string(enc.N + 0.5) + ")");
  }
}

// Box coordinates of a seed using at most N photons: r in [-R, R] with
// cosh R = 2N + 1, and u in [0, 1] the share of the remaining seed energy
// spent on thermal excitation.
struct Decoded {
  double t;
  double seed_energy;  // (t + 1/2) cosh r
  double noise_total;  // c_q + c_p at saturation
};

Decoded decode(double r, double u, double N) {
  const double cr = std::cosh(r);
  const double room = std::max((N + 0.5) / cr - 0.5, 0.0);
  const double t = u * room;
  const double energy = (t + 0.5) * cr;
  return {t, energy, std::max(2.0 * (N + 0.5 - energy), 0.0)};
}

class ModeObjective {
 public:
  ModeObjective(Quantity quantity, const GlobalEnvMode& env, double eta, double N)
      : quantity_(quantity), env_q_(env.q_variance()), env_p_(env.p_variance()), eta_(eta),
        N_(N) {}

  double radius() const { return std::acosh(2.0 * N_ + 1.0); }

  double operator()(double r, double u) const { return evaluate(r, u, nullptr); }

  ModeEncoding encode(double r, double u) const {
    ModeEncoding enc;
    evaluate(r, u, &enc);
    return enc;
  }

 private:
  double evaluate(double r, double u, ModeEncoding* enc) const {
    const Decoded d = decode(r, u, N_);
    switch (quantity_) {
      case Quantity::Classical: {
        const mode::OutputVariances<double> seed = mode::seed_output(d.t, r, env_q_, env_p_, eta_);
        // The ensemble term is concave in the q/p split; its maximizer balances
        // the output variances.
        const double c_q =
            std::clamp((seed.p + eta_ * d.noise_total - seed.q) / (2.0 * eta_), 0.0, d.noise_total);
        const double c_p = d.noise_total - c_q;
        if (enc != nullptr) {
          *enc = {d.t, r, c_q, c_p, N_};
        }
        return mode::holevo(d.t, r, c_q, c_p, env_q_, env_p_, eta_);
      }
      case Quantity::Quantum:
        if (enc != nullptr) {
          *enc = {d.t, r, 0.0, 0.0, d.seed_energy - 0.5};
        }
        return mode::coherent(d.t, r, env_q_, env_p_, eta_);
      case Quantity::EntAssisted:
        if (enc != nullptr) {
          *enc = {d.t, r, 0.0, 0.0, d.seed_energy - 0.5};
        }
        return mode::mutual(d.t, r, env_q_, env_p_, eta_);
    }
    return 0.0;
  }

  Quantity quantity_;
  double env_q_;
  double env_p_;
  double eta_;
  double N_;
};

struct Point {
  double r;
  double u;
  double value;
};

// Coordinate ascent over (r, u) with full-interval line searches.
Point coordinate_ascent(const ModeObjective& f, Point start, const ModeSolverOptions& options,
                        int& evaluations) {
  const double radius = f.radius();
  Point p = start;
  p.value = f(p.r, p.u);
  ++evaluations;
  for (int cycle = 0; cycle < options.max_cycles; ++cycle) {
    const double previous = p.value;
    const detail::LineMax along_r = detail::maximize_on_interval(
        [&](double r) { return f(r, p.u); }, -radius, radius, options.scan_points, &p.r);
    evaluations += along_r.evaluations;
    if (along_r.value > p.value) {
      p.r = along_r.x;
      p.value = along_r.value;
    }
    const detail::LineMax along_u = detail::maximize_on_interval(
        [&](double u) { return f(p.r, u); }, 0.0, 1.0, (options.scan_points + 1) / 2, &p.u);
    evaluations += along_u.evaluations;
    if (along_u.value > p.value) {
      p.u = along_u.x;
      p.value = along_u.value;
    }
    if (p.value - previous <= options.cycle_tolerance * std::max(1.0, std::abs(p.value))) {
      break;
    }
  }
  return p;
}

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::Classical:
      return "classical";
    case Quantity::Quantum:
      return "quantum";
    case Quantity::EntAssisted:
      return "ent-assisted";
  }
  return "unknown";
}

double EncodingParams::mean_photons() const {
  if (modes.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (const ModeEncoding& m : modes) {
    total += m.N;
  }
  return total / static_cast<double>(modes.size());
}

double holevo_chi(const ModeEncoding& enc, const GlobalEnvMode& env, double eta) {
  require_eta(eta);
  require_encoding(enc);
  return mode::holevo(std::max(enc.t, 0.0), enc.r, std::max(enc.c_q, 0.0),
                      std::max(enc.c_p, 0.0), env.q_variance(), env.p_variance(), eta);
}

double holevo_chi(const EncodingParams& params, std::span<const GlobalEnvMode> env, double eta) {
  if (params.modes.size() != env.size()) {
    throw std::invalid_argument("holevo_chi: mode count mismatch");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < env.size(); ++j) {
    total += holevo_chi(params.modes[j], env[j], eta);
  }
  return total;
}

Eigen::Vector4d holevo_chi_gradient(const ModeEncoding& enc, const GlobalEnvMode& env,
                                    double eta) {
  require_eta(eta);
  const AD4 t(enc.t, 4, 0);
  const AD4 r(enc.r, 4, 1);
  const AD4 cq(enc.c_q, 4, 2);
  const AD4 cp(enc.c_p, 4, 3);
  return mode::holevo(t, r, cq, cp, env.q_variance(), env.p_variance(), eta).derivatives();
}

double coherent_information(double t, double r, const GlobalEnvMode& env, double eta) {
  require_eta(eta);
  if (t < 0.0) {
    throw std::invalid_argument("coherent_information: t must be >= 0");
  }
  const mode::JointSpectrum<double> joint =
      mode::joint_output_spectrum(t, r, env.q_variance(), env.p_variance(), eta);
  if (joint.nu_minus < 0.5 - kPhysicalTolerance) {
    throw UnphysicalStateError("coherent_information: joint output below the uncertainty bound (t=" +
                               std::to_string(t) + ", r=" + std::to_string(r) +
                               ", nu=" + std::to_string(joint.nu_minus) + ")");
  }
  return mode::coherent(t, r, env.q_variance(), env.p_variance(), eta);
}

Eigen::Vector2d coherent_information_gradient(double t, double r, const GlobalEnvMode& env,
                                              double eta) {
  require_eta(eta);
  return mode::coherent(AD2(t, 2, 0), AD2(r, 2, 1), env.q_variance(), env.p_variance(), eta)
      .derivatives();
}

double quantum_mutual_information(double t, double r, const GlobalEnvMode& env, double eta) {
  return g_entropy(t) + coherent_information(t, r, env, eta);
}

Eigen::Vector2d quantum_mutual_information_gradient(double t, double r,
                                                    const GlobalEnvMode& env, double eta) {
  require_eta(eta);
  return mode::mutual(AD2(t, 2, 0), AD2(r, 2, 1), env.q_variance(), env.p_variance(), eta)
      .derivatives();
}

double coherent_information_general(const Eigen::Matrix2d& input, const GlobalEnvMode& env,
                                    double eta) {
  require_eta(eta);
  const double det = input.determinant();
  if (det < 0.25 - kPhysicalTolerance || input(0, 0) <= 0.0) {
    throw UnphysicalStateError("coherent_information_general: input violates the uncertainty bound");
  }
  // input = nu S S^T with S = (input / nu)^{1/2} symplectic (unit determinant).
  // Rounding can leave a pure input a hair below the bound.
  const double nu = std::max(std::sqrt(std::max(det, 0.0)), 0.5);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(input / nu);
  const Eigen::Matrix2d s = solver.operatorSqrt();

  Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
  local.topLeftCorner<2, 2>() = s;
  const Eigen::Matrix4d tau = local * purify_single_mode(nu - 0.5, 0.0).matrix() * local.transpose();

  Eigen::Matrix4d loss = Eigen::Matrix4d::Identity();
  loss(0, 0) = loss(1, 1) = std::sqrt(eta);
  Eigen::Matrix4d out = loss * tau * loss;
  out(0, 0) += (1.0 - eta) * env.q_variance();
  out(1, 1) += (1.0 - eta) * env.p_variance();

  TwoModeCov joint;
  joint.A = out.topLeftCorner<2, 2>();
  joint.B = out.bottomRightCorner<2, 2>();
  joint.C = out.bottomLeftCorner<2, 2>();
  return single_mode_entropy(joint.A) - von_neumann_entropy(joint.to_general());
}

double coherent_information_rotated(double t, double r, double phi, const GlobalEnvMode& env,
                                    double eta) {
  Eigen::Matrix2d rot;
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return coherent_information_general(rot * SingleModeCov{t, r}.matrix() * rot.transpose(), env,
                                      eta);
}

ModeSolution maximize_mode(Quantity quantity, const GlobalEnvMode& env, double eta, double N,
                           const ModeSolverOptions& options) {
  require_eta(eta);
  if (!(N >= 0.0)) {
    throw std::invalid_argument("maximize_mode: N must be >= 0");
  }
  ModeSolution best;
  if (eta == 0.0 || N == 0.0) {
    best.encoding.N = quantity == Quantity::Classical ? N : 0.0;
    best.encoding.c_q = best.encoding.c_p = quantity == Quantity::Classical ? N : 0.0;
    return best;
  }

  const ModeObjective f(quantity, env, eta, N);
  const double radius = f.radius();
  const double toward = env.s >= 0.0 ? 1.0 : -1.0;

  std::vector<Point> seeds;
  if (quantity == Quantity::Classical) {
    // Closed-form optimum of the small-memory regime, and the strong-memory one.
    seeds.push_back({std::clamp(env.s, -radius, radius), 0.0, 0.0});
    seeds.push_back({toward * std::min(std::log(2.0 * N + 1.0), radius), 0.0, 0.0});
  } else {
    seeds.push_back({0.0, 1.0, 0.0});
    seeds.push_back({std::clamp(env.s, -radius, radius), 1.0, 0.0});
  }

  Point winner{0.0, 0.0, -std::numeric_limits<double>::infinity()};
  for (const Point& seed : seeds) {
    const Point p = coordinate_ascent(f, seed, options, best.evaluations);
    if (p.value > winner.value) {
      winner = p;
    }
  }

  best.value = winner.value;
  best.encoding = f.encode(winner.r, winner.u);
  if (quantity == Quantity::Quantum && best.value <= 0.0) {
    // A pure seed (t = 0) has zero coherent information.
    best.value = 0.0;
    best.encoding = {};
  }
  return best;
}

RotatedModeSolution maximize_mode_rotated_coherent(const GlobalEnvMode& env, double eta,
                                                   double N,
                                                   const ModeSolverOptions& options) {
  const ModeSolution diagonal = maximize_mode(Quantity::Quantum, env, eta, N, options);
  RotatedModeSolution best{diagonal.value, diagonal.encoding.t, diagonal.encoding.r, 0.0};
  if (N == 0.0 || eta == 0.0) {
    return best;
  }
  const double radius = std::acosh(2.0 * N + 1.0);
  auto value = [&](double r, double u, double phi) {
    const Decoded d = decode(r, u, N);
    return coherent_information_rotated(d.t, r, phi, env, eta);
  };

  double r = diagonal.encoding.r;
  double u = 1.0;
  {
    const double room = std::max((N + 0.5) / std::cosh(r) - 0.5, 0.0);
    u = room > 0.0 ? std::clamp(diagonal.encoding.t / room, 0.0, 1.0) : 0.0;
  }
  double phi = 0.0;
  double current = value(r, u, phi);
  const double half_pi = 0.5 * std::numbers::pi;
  for (int cycle = 0; cycle < options.max_cycles; ++cycle) {
    const double previous = current;
    auto lr = detail::maximize_on_interval([&](double x) { return value(x, u, phi); }, -radius,
                                           radius, options.scan_points, &r);
    if (lr.value > current) {
      r = lr.x;
      current = lr.value;
    }
    auto lu = detail::maximize_on_interval([&](double x) { return value(r, x, phi); }, 0.0, 1.0,
                                           options.scan_points, &u);
    if (lu.value > current) {
      u = lu.x;
      current = lu.value;
    }
    auto lp = detail::maximize_on_interval([&](double x) { return value(r, u, x); }, -half_pi,
                                           half_pi, options.scan_points, &phi);
    if (lp.value > current) {
      phi = lp.x;
      current = lp.value;
    }
    if (current - previous <= 1e-12) {
      break;
    }
  }
  if (current > best.value) {
    best = {current, decode(r, u, N).t, r, phi};
  }
  return best;
}

}  // namespace corrloss
