#include "corrloss/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace corrloss {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kSmallExcitation = 1e-12;

void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("covariance matrix must be square");
  }
  if (m.rows() == 0 || m.rows() % 2 != 0) {
    throw std::invalid_argument("covariance matrix must have even, nonzero dimension");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw std::invalid_argument("covariance matrix is not symmetric");
  }
}

// (q1, p1, q2, p2) <-> (q1, q2, p1, p2)
Eigen::Matrix4d mode_to_quadrature_order(const Eigen::Matrix4d& m) {
  constexpr int perm[4] = {0, 2, 1, 3};
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out(perm[i], perm[j]) = m(i, j);
    }
  }
  return out;
}

Eigen::Matrix4d quadrature_to_mode_order(const Eigen::Matrix4d& m) {
  constexpr int perm[4] = {0, 2, 1, 3};
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out(i, j) = m(perm[i], perm[j]);
    }
  }
  return out;
}

}  // namespace

Eigen::Matrix2d SingleModeCov::matrix() const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = (t + 0.5) * std::exp(r);
  m(1, 1) = (t + 0.5) * std::exp(-r);
  return m;
}

GeneralCov::GeneralCov(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  require_symmetric(matrix_);
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
}

GeneralCov GeneralCov::vacuum(int modes) {
  if (modes < 1) {
    throw std::invalid_argument("vacuum needs at least one mode");
  }
  return GeneralCov(0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GeneralCov GeneralCov::direct_sum(const GeneralCov& a, const GeneralCov& b) {
  const int ma = a.modes();
  const int mb = b.modes();
  const int m = ma + mb;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  // Interleave so that q's stay first, p's second.
  for (int qa = 0; qa < 2; ++qa) {
    for (int qb = 0; qb < 2; ++qb) {
      out.block(qa * m, qb * m, ma, ma) = a.matrix().block(qa * ma, qb * ma, ma, ma);
      out.block(qa * m + ma, qb * m + ma, mb, mb) = b.matrix().block(qa * mb, qb * mb, mb, mb);
    }
  }
  return GeneralCov(std::move(out));
}

Eigen::Matrix4d TwoModeCov::matrix() const {
  Eigen::Matrix4d m;
  m << A, C.transpose(), C, B;
  return m;
}

GeneralCov TwoModeCov::to_general() const {
  return GeneralCov(mode_to_quadrature_order(matrix()));
}

TwoModeCov TwoModeCov::from_general(const GeneralCov& cov) {
  if (cov.modes() != 2) {
    throw std::invalid_argument("TwoModeCov::from_general needs a two-mode state");
  }
  const Eigen::Matrix4d m = quadrature_to_mode_order(cov.matrix());
  TwoModeCov out;
  out.A = m.block<2, 2>(0, 0);
  out.B = m.block<2, 2>(2, 2);
  out.C = m.block<2, 2>(2, 0);
  return out;
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  j.topRightCorner(modes, modes) = Eigen::MatrixXd::Identity(modes, modes);
  j.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return j;
}

double g_entropy(double x) {
  if (x < -kPhysicalTolerance || std::isnan(x)) {
    throw std::domain_error("g_entropy: negative mean excitation " + std::to_string(x));
  }
  if (x <= 0.0) {
    return 0.0;
  }
  if (x < kSmallExcitation) {
    // (x+1)log(x+1) = x + O(x^2)
    return x * (std::numbers::log2e - std::log2(x));
  }
  // Same as (x+1)log2(x+1) - x log2 x without the cancellation at large x.
  return (std::log1p(x) + x * std::log1p(1.0 / x)) * std::numbers::log2e;
}

double g_entropy_derivative(double x) {
  if (x <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::log1p(1.0 / x) * std::numbers::log2e;
}

std::vector<double> symplectic_eigenvalues(const GeneralCov& cov) {
  const int m = cov.modes();
  if (m == 1) {
    const double det = cov.matrix().determinant();
    return {std::sqrt(std::max(det, 0.0))};
  }

  // V^{1/2} J V^{1/2} is antisymmetric with eigenvalues +-i nu; its square
  // (negated) is symmetric positive semidefinite with eigenvalues nu^2, each
  // appearing twice.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> vsolver(cov.matrix());
  const Eigen::VectorXd root = vsolver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd sqrt_v =
      vsolver.eigenvectors() * root.asDiagonal() * vsolver.eigenvectors().transpose();
  const Eigen::MatrixXd k = sqrt_v * symplectic_form(m) * sqrt_v;
  const Eigen::MatrixXd kk = k.transpose() * k;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ksolver(kk, Eigen::EigenvaluesOnly);
  std::vector<double> squares(ksolver.eigenvalues().data(),
                              ksolver.eigenvalues().data() + 2 * m);
  std::sort(squares.begin(), squares.end(), std::greater<>());

  std::vector<double> nu(m);
  for (int a = 0; a < m; ++a) {
    const double pair = 0.5 * (squares[2 * a] + squares[2 * a + 1]);
    nu[a] = std::sqrt(std::max(pair, 0.0));
  }
  return nu;
}

double von_neumann_entropy(const GeneralCov& cov) {
  double entropy = 0.0;
  for (double nu : symplectic_eigenvalues(cov)) {
    if (nu < 0.5 - kPhysicalTolerance) {
      throw UnphysicalStateError("symplectic eigenvalue " + std::to_string(nu) +
                                 " below 1/2");
    }
    entropy += g_entropy(std::max(nu - 0.5, 0.0));
  }
  return entropy;
}

TwoModeCov purify_single_mode(double t, double r) {
  if (t < 0.0) {
    throw std::invalid_argument("purify_single_mode: t must be >= 0");
  }
  const double a = (t + 0.5) * std::exp(r);
  const double b = (t + 0.5) * std::exp(-r);
  const double radicand = a * b - 0.25;
  if (radicand < -kPhysicalTolerance) {
    throw std::logic_error("purify_single_mode: ab < 1/4");
  }
  const double x = std::sqrt(std::max(radicand, 0.0));

  TwoModeCov tau;
  tau.A << a, 0.0, 0.0, b;
  tau.B << b, 0.0, 0.0, a;
  tau.C << x, 0.0, 0.0, -x;
  return tau;
}

double ppt_min_symplectic(const TwoModeCov& cov) {
  TwoModeCov flipped = cov;
  const Eigen::Matrix2d flip = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  flipped.B = flip * cov.B * flip;
  flipped.C = flip * cov.C;
  const std::vector<double> nu = symplectic_eigenvalues(flipped.to_general());
  return nu.back();
}

Eigen::Matrix2d reduce_to_mode(const GeneralCov& cov, int k) {
  const int m = cov.modes();
  if (k < 0 || k >= m) {
    throw std::out_of_range("reduce_to_mode: mode index " + std::to_string(k) +
                            " out of range");
  }
  const Eigen::MatrixXd& v = cov.matrix();
  Eigen::Matrix2d out;
  out << v(k, k), v(k, m + k), v(m + k, k), v(m + k, m + k);
  return out;
}

double single_mode_entropy(const Eigen::Matrix2d& cov) {
  const double nu = std::sqrt(std::max(cov.determinant(), 0.0));
  if (nu < 0.5 - kPhysicalTolerance) {
    throw UnphysicalStateError("single-mode determinant below 1/4");
  }
  return g_entropy(std::max(nu - 0.5, 0.0));
}

}  // namespace corrloss
