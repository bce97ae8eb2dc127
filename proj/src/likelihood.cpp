#include "tvgp/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tvgp/errors.hpp"

namespace tvgp {

DenseTensor estimate_mean(const DenseTensor& d) {
  if (d.rank() < 1) throw ShapeError("estimate_mean: rank-0 tensor has no replicate mode");
  const auto m1 = static_cast<Eigen::Index>(d.dim(0));
  const auto rest = static_cast<Eigen::Index>(d.size()) / m1;
  Eigen::Map<const Eigen::MatrixXd> fibres(d.data().data(), m1, rest);
  const Eigen::RowVectorXd means = fibres.colwise().mean();

  DenseTensor out(d.dims());
  Eigen::Map<Eigen::MatrixXd> dst(out.data().data(), m1, rest);
  dst = means.replicate(m1, 1);
  return out;
}

CenteredData CenteredData::from(const DenseTensor& d, double relative_jitter) {
  return {subtract(d, estimate_mean(d)), empirical_sigma2(d, relative_jitter)};
}

double tensor_normal_log_density(const DenseTensor& residual, std::span<const SpdMatrix> factors) {
  const auto m = static_cast<double>(residual.size());
  const double norm_term = -0.5 * m * std::log(2.0 * std::numbers::pi);

  double det_term = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double exponent = m / (2.0 * static_cast<double>(residual.dim(i)));
    det_term -= exponent * factors[i].log_det();
  }
  if (!std::isfinite(det_term)) {
    throw NumericalError("log-likelihood determinant term is not finite (" +
                         std::to_string(det_term) + ")");
  }

  const double quad_term = -0.5 * frobenius_norm_sq(whiten(residual, factors));
  if (!std::isfinite(quad_term)) {
    throw NumericalError("log-likelihood quadratic term is not finite (" +
                         std::to_string(quad_term) + ")");
  }
  return norm_term + det_term + quad_term;
}

double log_likelihood(const DenseTensor& d, const GpModel& model) {
  if (d.dims() != model.mean.dims()) {
    throw ShapeError("log_likelihood: data and mean tensor shapes differ");
  }
  const std::vector<SpdMatrix> factors{model.sigma1, model.sigma2, model.sigma3};
  return tensor_normal_log_density(subtract(d, model.mean), factors);
}

DesignPoints append_point(const DesignPoints& design, const Eigen::VectorXd& point) {
  if (design.rows() > 0 && design.cols() != point.size()) {
    throw ShapeError("append_point: point has dimension " + std::to_string(point.size()) +
                     ", design has " + std::to_string(design.cols()));
  }
  DesignPoints out(design.rows() + 1, point.size());
  out.topRows(design.rows()) = design;
  out.row(design.rows()) = point.transpose();
  return out;
}

double log_likelihood_augmented(const CenteredData& centered, const Eigen::VectorXd& s_test,
                                const DesignPoints& design, const SqeKernelParams& kernel,
                                const Sigma3Params& sigma3, double relative_jitter) {
  if (centered.residual.rank() != 3) {
    throw ShapeError("augmented likelihood expects a rank-3 tensor");
  }
  if (static_cast<Eigen::Index>(centered.residual.dim(0)) != design.rows() + 1) {
    throw ShapeError("augmented tensor has " + std::to_string(centered.residual.dim(0)) +
                     " design-mode slices but there are " + std::to_string(design.rows()) +
                     " design points (expected one extra test slice)");
  }
  const std::vector<SpdMatrix> factors{
      build_sqe_matrix(append_point(design, s_test), kernel, relative_jitter),
      centered.sigma2,
      build_sigma3(sigma3),
  };
  return tensor_normal_log_density(centered.residual, factors);
}

double log_likelihood_augmented(const DenseTensor& d_star, const Eigen::VectorXd& s_test,
                                const DesignPoints& design, const SqeKernelParams& kernel,
                                const Sigma3Params& sigma3, double relative_jitter) {
  return log_likelihood_augmented(CenteredData::from(d_star, relative_jitter), s_test, design,
                                  kernel, sigma3, relative_jitter);
}

}  // namespace tvgp
