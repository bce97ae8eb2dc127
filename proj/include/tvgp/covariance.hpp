#pragma once

#include <span>

#include <Eigen/Dense>

#include "tvgp/tensor.hpp"

namespace tvgp {

/// Diagonal inflation, relative to the mean diagonal entry, applied before
/// factorizing kernel and empirical covariance matrices.
inline constexpr double kDefaultRelativeJitter = 1e-8;

/// Design points, one d-dimensional input per row.
using DesignPoints = Eigen::MatrixXd;

/// Diagonal of Q in exp(-(s - s')^T Q (s - s')). Unit amplitude.
struct SqeKernelParams {
  Eigen::VectorXd q_diag;

  /// Throws DomainError unless every entry is positive and finite and the
  /// length equals `input_dim`.
  void validate(Eigen::Index input_dim) const;
};

/// (sigma11, sigma22, rho) parametrisation of the 2x2 velocity-component covariance.
struct Sigma3Params {
  double sigma11 = 1.0;
  double sigma22 = 1.0;
  double rho = 0.0;

  void validate() const;
  [[nodiscard]] double sigma12() const;
};

/// Symmetric positive-definite matrix with its lower Cholesky factor.
///
/// The stored matrix already contains any jitter that was added; the factor
/// and log-determinant refer to that stored matrix. Instances are immutable
/// once built and safe to share between threads.
class SpdMatrix {
 public:
  /// Adds `relative_jitter * mean(diag)` to the diagonal, then factorizes.
  /// Throws ShapeError for non-square or asymmetric input and
  /// FactorizationError naming the first nonpositive pivot.
  static SpdMatrix factorize(Eigen::MatrixXd entries, double relative_jitter = 0.0);

  [[nodiscard]] Eigen::Index order() const noexcept { return matrix_.rows(); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  [[nodiscard]] const Eigen::MatrixXd& cholesky() const noexcept { return chol_; }
  [[nodiscard]] double log_det() const noexcept { return log_det_; }
  [[nodiscard]] double jitter() const noexcept { return jitter_; }

 private:
  SpdMatrix() = default;

  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
  double jitter_ = 0.0;
};

/// Pre-jitter SQE Gram matrix; entry (j, p) = exp(-sum_a q_a (s_j[a] - s_p[a])^2).
Eigen::MatrixXd sqe_kernel_matrix(const DesignPoints& points, const SqeKernelParams& params);

SpdMatrix build_sqe_matrix(const DesignPoints& points, const SqeKernelParams& params,
                           double relative_jitter = kDefaultRelativeJitter);

/// Pre-jitter empirical covariance between mode-1 slices of an m1 x m2 x m3 tensor:
///
///   e_bc = 1/(m3 - 1) * sum_t [ 1/m1 * sum_s (v_st^b - mean_t^b)(v_st^c - mean_t^c) ]
///
/// where v^b is the m1 x m3 slice at mode-1 index b and mean_t^b its column means.
Eigen::MatrixXd empirical_sigma2_matrix(const DenseTensor& d);

SpdMatrix empirical_sigma2(const DenseTensor& d, double relative_jitter = kDefaultRelativeJitter);

/// Throws DomainError for |rho| >= 1 or a nonpositive diagonal. No jitter by
/// default: the matrix is positive definite by construction.
SpdMatrix build_sigma3(const Sigma3Params& p, double relative_jitter = 0.0);

/// Applies the inverse Cholesky factor of factors[p] along every mode p via
/// triangular solves. `factors.size()` must equal the tensor rank.
DenseTensor whiten(const DenseTensor& t, std::span<const SpdMatrix> factors);

}  // namespace tvgp
