#include "tvgp/covariance.hpp"

#include <cmath>
#include <string>

#include "tvgp/errors.hpp"

namespace tvgp {

namespace {

// Locates the first failing pivot of an unblocked Cholesky sweep. Only used
// to report which pivot failed after Eigen's LLT has signalled failure.
long first_bad_pivot(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) return static_cast<long>(j);
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return static_cast<long>(n - 1);
}

}  // namespace

void SqeKernelParams::validate(Eigen::Index input_dim) const {
  if (q_diag.size() != input_dim) {
    throw DomainError("SQE kernel has " + std::to_string(q_diag.size()) +
                      " inverse length scales for inputs of dimension " +
                      std::to_string(input_dim));
  }
  for (Eigen::Index a = 0; a < q_diag.size(); ++a) {
    if (!(q_diag[a] > 0.0) || !std::isfinite(q_diag[a])) {
      throw DomainError("SQE inverse length scale q[" + std::to_string(a) +
                        "] must be positive and finite, got " + std::to_string(q_diag[a]));
    }
  }
}

void Sigma3Params::validate() const {
  if (!(sigma11 > 0.0) || !(sigma22 > 0.0) || !std::isfinite(sigma11) ||
      !std::isfinite(sigma22)) {
    throw DomainError("Sigma3 diagonal entries must be positive, got sigma11=" +
                      std::to_string(sigma11) + " sigma22=" + std::to_string(sigma22));
  }
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("Sigma3 correlation must satisfy |rho| < 1, got " + std::to_string(rho));
  }
}

double Sigma3Params::sigma12() const { return rho * std::sqrt(sigma11 * sigma22); }

SpdMatrix SpdMatrix::factorize(Eigen::MatrixXd entries, double relative_jitter) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw ShapeError("SpdMatrix: expected a non-empty square matrix, got " +
                     std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  }
  const double scale = std::max(entries.cwiseAbs().maxCoeff(), 1e-300);
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ShapeError("SpdMatrix: input is not symmetric");
  }
  if (!entries.allFinite()) throw NumericalError("SpdMatrix: input has non-finite entries");

  SpdMatrix out;
  out.jitter_ = relative_jitter * entries.diagonal().mean();
  entries.diagonal().array() += out.jitter_;
  out.matrix_ = std::move(entries);

  Eigen::LLT<Eigen::MatrixXd> llt(out.matrix_);
  if (llt.info() != Eigen::Success) {
    const long pivot = first_bad_pivot(out.matrix_);
    throw FactorizationError("Cholesky factorization failed at pivot " + std::to_string(pivot) +
                                 " of " + std::to_string(out.matrix_.rows()) +
                                 " (matrix not numerically positive definite)",
                             pivot);
  }
  out.chol_ = llt.matrixL();
  out.log_det_ = 2.0 * out.chol_.diagonal().array().log().sum();
  return out;
}

Eigen::MatrixXd sqe_kernel_matrix(const DesignPoints& points, const SqeKernelParams& params) {
  if (points.rows() < 1) throw PreconditionError("SQE kernel matrix needs at least one point");
  params.validate(points.cols());
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Eigen::Index p = j + 1; p < n; ++p) {
      const double r = ((points.row(j) - points.row(p)).array().square() *
                        params.q_diag.transpose().array())
                           .sum();
      k(j, p) = k(p, j) = std::exp(-r);
    }
  }
  return k;
}

SpdMatrix build_sqe_matrix(const DesignPoints& points, const SqeKernelParams& params,
                           double relative_jitter) {
  return SpdMatrix::factorize(sqe_kernel_matrix(points, params), relative_jitter);
}

Eigen::MatrixXd empirical_sigma2_matrix(const DenseTensor& d) {
  if (d.rank() != 3) {
    throw ShapeError("empirical Sigma2 expects a rank-3 tensor, got rank " +
                     std::to_string(d.rank()));
  }
  const auto m1 = static_cast<Eigen::Index>(d.dim(0));
  const auto m2 = static_cast<Eigen::Index>(d.dim(1));
  const auto m3 = static_cast<Eigen::Index>(d.dim(2));
  if (m3 < 2) {
    throw PreconditionError("empirical Sigma2 needs at least 2 entries along mode 2, got " +
                            std::to_string(m3));
  }
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m2, m2);
  for (Eigen::Index t = 0; t < m3; ++t) {
    Eigen::Map<const Eigen::MatrixXd> sheet(d.data().data() + t * m1 * m2, m1, m2);
    const Eigen::MatrixXd centered = sheet.rowwise() - sheet.colwise().mean();
    e.noalias() += centered.transpose() * centered / static_cast<double>(m1);
  }
  e /= static_cast<double>(m3 - 1);
  // Exact symmetry; the product above can differ in the last bit.
  return (e + e.transpose()) * 0.5;
}

SpdMatrix empirical_sigma2(const DenseTensor& d, double relative_jitter) {
  return SpdMatrix::factorize(empirical_sigma2_matrix(d), relative_jitter);
}

SpdMatrix build_sigma3(const Sigma3Params& p, double relative_jitter) {
  p.validate();
  Eigen::Matrix2d m;
  m << p.sigma11, p.sigma12(), p.sigma12(), p.sigma22;
  return SpdMatrix::factorize(m, relative_jitter);
}

DenseTensor whiten(const DenseTensor& t, std::span<const SpdMatrix> factors) {
  if (factors.size() != t.rank()) {
    throw ShapeError("whiten: " + std::to_string(factors.size()) + " factors for a rank-" +
                     std::to_string(t.rank()) + " tensor");
  }
  for (std::size_t p = 0; p < factors.size(); ++p) {
    if (static_cast<std::size_t>(factors[p].order()) != t.dim(p)) {
      throw ShapeError("whiten: factor for mode " + std::to_string(p) + " has order " +
                       std::to_string(factors[p].order()) + " but mode extent is " +
                       std::to_string(t.dim(p)));
    }
  }

  DenseTensor out = t;
  double* data = out.data().data();
  std::size_t left = 1;
  for (std::size_t p = 0; p < factors.size(); ++p) {
    const std::size_t extent = t.dim(p);
    const std::size_t right = t.size() / (left * extent);
    const auto& chol = factors[p].cholesky();
    const auto e = static_cast<Eigen::Index>(extent);
    if (left == 1) {
      // Mode 0: one left-solve over all fibres at once.
      Eigen::Map<Eigen::MatrixXd> fibres(data, e, static_cast<Eigen::Index>(right));
      chol.triangularView<Eigen::Lower>().solveInPlace(fibres);
    } else {
      // slab <- slab * L^{-T}
      for (std::size_t r = 0; r < right; ++r) {
        Eigen::Map<Eigen::MatrixXd> slab(data + r * left * extent,
                                         static_cast<Eigen::Index>(left), e);
        chol.transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(slab);
      }
    }
    left *= extent;
  }
  return out;
}

}  // namespace tvgp
