#pragma once

#include <span>

#include "tvgp/covariance.hpp"
#include "tvgp/tensor.hpp"

namespace tvgp {

struct GpModel {
  DenseTensor mean;  // m1 x m2 x m3
  SpdMatrix sigma1;  // design-point mode
  SpdMatrix sigma2;  // within-sheet mode, empirical plug-in
  SpdMatrix sigma3;  // velocity-component mode
};

/// Mode-0 replicate average, broadcast back along mode 0.
DenseTensor estimate_mean(const DenseTensor& d);

/// Training data with its mean removed and the empirical Sigma2 attached.
/// Both only depend on the data, so they are built once per data set.
struct CenteredData {
  DenseTensor residual;
  SpdMatrix sigma2;

  static CenteredData from(const DenseTensor& d, double relative_jitter = kDefaultRelativeJitter);
};

/// Zero-mean tensor-normal log-density of `residual` with one covariance
/// factor per mode:
///
///   -(m/2) log 2pi - sum_i (m / (2 m_i)) log|Sigma_i| - ||whiten(residual)||^2 / 2
///
/// Throws NumericalError naming the term that is not finite.
double tensor_normal_log_density(const DenseTensor& residual, std::span<const SpdMatrix> factors);

double log_likelihood(const DenseTensor& d, const GpModel& model);

/// `design` with `point` appended as a final row.
DesignPoints append_point(const DesignPoints& design, const Eigen::VectorXd& point);

/// Likelihood of the augmented tensor whose last mode-0 slice was observed at
/// the unknown input `s_test`. Rebuilds Sigma1* over design + {s_test} and
/// re-estimates the mean and Sigma2 from `d_star`.
double log_likelihood_augmented(const DenseTensor& d_star, const Eigen::VectorXd& s_test,
                                const DesignPoints& design, const SqeKernelParams& kernel,
                                const Sigma3Params& sigma3,
                                double relative_jitter = kDefaultRelativeJitter);

/// Same as above with the data-only quantities precomputed by CenteredData::from(d_star).
double log_likelihood_augmented(const CenteredData& centered, const Eigen::VectorXd& s_test,
                                const DesignPoints& design, const SqeKernelParams& kernel,
                                const Sigma3Params& sigma3,
                                double relative_jitter = kDefaultRelativeJitter);

}  // namespace tvgp
