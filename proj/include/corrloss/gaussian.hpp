// gaussian.hpp: Entropy and symplectic primitives for bosonic Gaussian states
//
// Conventions: hbar = 1, vacuum quadrature variance 1/2, entropies in bits.
// Multimode covariance matrices use (q_1..q_m, p_1..p_m) ordering; two-mode
// blocks use the mode-wise (q_1, p_1, q_2, p_2) ordering.

#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace corrloss {

// Symplectic eigenvalues down to 1/2 - kPhysicalTolerance are accepted.
inline constexpr double kPhysicalTolerance = 1e-9;

class UnphysicalStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (t + 1/2) diag(e^r, e^-r): squeezed thermal single-mode state.
struct SingleModeCov {
  double t = 0.0;
  double r = 0.0;

  Eigen::Matrix2d matrix() const;
  double determinant() const { return (t + 0.5) * (t + 0.5); }
  double symplectic_eigenvalue() const { return t + 0.5; }
};

class GeneralCov {
 public:
  // Throws std::invalid_argument unless the matrix is square, of even
  // dimension, and symmetric to within 1e-12 relative.
  explicit GeneralCov(Eigen::MatrixXd matrix);

  static GeneralCov vacuum(int modes);
  static GeneralCov direct_sum(const GeneralCov& a, const GeneralCov& b);

  int modes() const { return static_cast<int>(matrix_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

// [[A, C^T], [C, B]] in (q_1, p_1, q_2, p_2) ordering.
struct TwoModeCov {
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity() / 2;
  Eigen::Matrix2d B = Eigen::Matrix2d::Identity() / 2;
  Eigen::Matrix2d C = Eigen::Matrix2d::Zero();

  Eigen::Matrix4d matrix() const;
  GeneralCov to_general() const;
  static TwoModeCov from_general(const GeneralCov& cov);
};

// J = [[0, I], [-I, 0]] for (q..., p...) ordering.
Eigen::MatrixXd symplectic_form(int modes);

// (x+1) log2(x+1) - x log2 x. Tiny negative x (roundoff) is clamped to 0;
// x < -kPhysicalTolerance throws std::domain_error.
double g_entropy(double x);

// Derivative of g_entropy, log2((x+1)/x); infinite at 0.
double g_entropy_derivative(double x);

// Moduli of the eigenvalues of i J V, one per mode, sorted descending.
std::vector<double> symplectic_eigenvalues(const GeneralCov& cov);

// Sum of g(nu - 1/2) over the symplectic spectrum; throws
// UnphysicalStateError when some nu < 1/2 - kPhysicalTolerance.
double von_neumann_entropy(const GeneralCov& cov);

// Two-mode pure state whose first mode is SingleModeCov{t, r}; the ancilla
// block is diag(b, a) and the correlations diag(x, -x), x = sqrt(ab - 1/4).
TwoModeCov purify_single_mode(double t, double r);

// Smallest symplectic eigenvalue after flipping the second mode's momentum.
// The state is separable iff the result is >= 1/2.
double ppt_min_symplectic(const TwoModeCov& cov);

// The 2x2 (q_k, p_k) block; k is zero-based.
Eigen::Matrix2d reduce_to_mode(const GeneralCov& cov, int k);

// Entropy of a single-mode covariance block, g(sqrt(det) - 1/2).
double single_mode_entropy(const Eigen::Matrix2d& cov);

}  // namespace corrloss
