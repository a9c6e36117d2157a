// mode_functions.hpp: Closed-form entropic quantities of one global mode
// passing through a beam splitter with a squeezed thermal environment.
//
// Templated on the scalar so the same expressions serve plain evaluation
// and forward-mode derivatives (Eigen::AutoDiffScalar).

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

#include "corrloss/gaussian.hpp"

namespace corrloss::mode {

inline double value_of(double x) { return x; }

template <class S>
auto value_of(const S& x) -> decltype(x.value()) {
  return x.value();
}

template <class S>
S g(const S& x) {
  if constexpr (std::is_same_v<S, double>) {
    return g_entropy(std::max(x, 0.0));
  } else {
    using std::log;
    if (value_of(x) <= 0.0) {
      return S(0.0) * x;
    }
    // log(x + 1) + x log(1 + 1/x): no cancellation for large x.
    return (log(x + 1.0) + x * log(1.0 + 1.0 / x)) * std::numbers::log2e;
  }
}

// Output quadrature variances of eta * (t + 1/2) diag(e^r, e^-r) + (1 - eta) env.
template <class S>
struct OutputVariances {
  S q;
  S p;
};

template <class S>
OutputVariances<S> seed_output(const S& t, const S& r, double env_q, double env_p, double eta) {
  using std::exp;
  const S a = (t + 0.5) * exp(r);
  const S b = (t + 0.5) * exp(-r);
  return {eta * a + (1.0 - eta) * env_q, eta * b + (1.0 - eta) * env_p};
}

// chi = g(sqrt(det avg-output) - 1/2) - g(sqrt(det seed-output) - 1/2).
template <class S>
S holevo(const S& t, const S& r, const S& c_q, const S& c_p, double env_q, double env_p,
         double eta) {
  using std::sqrt;
  const OutputVariances<S> seed = seed_output(t, r, env_q, env_p, eta);
  const S avg_q = seed.q + eta * c_q;
  const S avg_p = seed.p + eta * c_p;
  return g(S(sqrt(avg_q * avg_p) - 0.5)) - g(S(sqrt(seed.q * seed.p) - 0.5));
}

// Symplectic eigenvalues (nu_plus, nu_minus) of the joint output of the
// channel and the purifying ancilla.
template <class S>
struct JointSpectrum {
  S nu_plus;
  S nu_minus;
};

template <class S>
JointSpectrum<S> joint_output_spectrum(const S& t, const S& r, double env_q, double env_p,
                                       double eta) {
  using std::exp;
  using std::sqrt;
  const S a = (t + 0.5) * exp(r);
  const S b = (t + 0.5) * exp(-r);
  const S x2 = t * (t + 1.0);  // a b - 1/4
  const OutputVariances<S> out = seed_output(t, r, env_q, env_p, eta);

  // Joint covariance: q block [[out.q, g], [g, b]], p block [[out.p, -g], [-g, a]]
  // with g^2 = eta x2. The squared symplectic eigenvalues are the eigenvalues
  // of the product of the blocks; writing the discriminant as a sum of a
  // square and a product keeps it accurate when the two nearly coincide.
  const S invariant = out.q * out.p + (t + 0.5) * (t + 0.5) - 2.0 * eta * x2;
  const S det = (out.q * b - eta * x2) * (out.p * a - eta * x2);
  const S half_split = 0.5 * (out.q * out.p - (t + 0.5) * (t + 0.5));
  S disc = half_split * half_split + eta * x2 * (a - out.q) * (out.p - b);
  if (value_of(disc) < 0.0) {
    disc = S(0.0) * disc;
  }
  const S nu_plus2 = 0.5 * invariant + sqrt(disc);
  // nu_plus^2 nu_minus^2 = det; avoids cancellation when nu_minus -> 1/2.
  const S nu_minus2 = det / nu_plus2;
  return {sqrt(nu_plus2), sqrt(nu_minus2)};
}

template <class S>
S coherent(const S& t, const S& r, double env_q, double env_p, double eta) {
  using std::sqrt;
  const OutputVariances<S> out = seed_output(t, r, env_q, env_p, eta);
  const JointSpectrum<S> joint = joint_output_spectrum(t, r, env_q, env_p, eta);
  return g(S(sqrt(out.q * out.p) - 0.5)) - g(S(joint.nu_plus - 0.5)) -
         g(S(joint.nu_minus - 0.5));
}

template <class S>
S mutual(const S& t, const S& r, double env_q, double env_p, double eta) {
  return g(t) + coherent(t, r, env_q, env_p, eta);
}

}  // namespace corrloss::mode
