#include "tvgp/synthetic.hpp"

#include <cmath>
#include <string>

#include "tvgp/errors.hpp"
#include "tvgp/likelihood.hpp"

namespace tvgp {

namespace {

constexpr std::uint64_t kStreamTestInput = 1;
constexpr std::uint64_t kStreamNoise = 2;

}  // namespace

DenseTensor colorize(const DenseTensor& z, const DenseTensor& mean,
                     std::span<const SpdMatrix> factors) {
  if (factors.size() != z.rank()) {
    throw ShapeError("colorize: " + std::to_string(factors.size()) + " factors for a rank-" +
                     std::to_string(z.rank()) + " tensor");
  }
  DenseTensor out = z;
  for (std::size_t p = 0; p < factors.size(); ++p) {
    out = mode_product(out, factors[p].cholesky(), p);
  }
  return add(out, mean);
}

DenseTensor standard_normal_tensor(std::vector<std::size_t> dims, Rng& rng) {
  DenseTensor out(std::move(dims));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : out.data()) x = normal(rng);
  return out;
}

DesignPoints make_polar_grid(std::size_t n_r, std::size_t n_phi, Bounds r_range,
                             Bounds phi_range) {
  if (n_r == 0 || n_phi == 0) throw PreconditionError("polar grid must have at least one cell");
  const double dr = r_range.width() / static_cast<double>(n_r);
  const double dphi = phi_range.width() / static_cast<double>(n_phi);
  DesignPoints grid(static_cast<Eigen::Index>(n_r * n_phi), 2);
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < n_r; ++k) {
    for (std::size_t l = 0; l < n_phi; ++l, ++row) {
      grid(row, 0) = r_range.lower + (static_cast<double>(k) + 0.5) * dr;
      grid(row, 1) = phi_range.lower + (static_cast<double>(l) + 0.5) * dphi;
    }
  }
  return grid;
}

Eigen::MatrixXd ar1_correlation(std::size_t order, double coefficient) {
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index c = 0; c < n; ++c) {
      m(b, c) = std::pow(coefficient, static_cast<double>(std::abs(b - c)));
    }
  }
  return m;
}

double identifiable_sigma3_trace(const SpdMatrix& sigma1, std::size_t m3) {
  const Eigen::Index n = sigma1.order();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) -
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd centered = centering * sigma1.matrix() * centering;
  const Eigen::MatrixXd whitened = Eigen::LLT<Eigen::MatrixXd>(sigma1.matrix()).solve(centered);
  return static_cast<double>(m3 - 1) * whitened.trace() / centered.trace();
}

SyntheticDataset generate_dataset(const DesignPoints& grid, const GpScalars& truth,
                                  const SyntheticOptions& options) {
  if (grid.rows() < 1 || grid.cols() != 2) {
    throw PreconditionError("synthetic data needs a non-empty grid of 2-d points");
  }
  if (options.m3 != 2) {
    throw PreconditionError("Sigma3 is 2x2, so the velocity mode must have extent 2, got " +
                            std::to_string(options.m3));
  }
  if (options.m2 < 1) throw PreconditionError("m2 must be >= 1");

  SyntheticDataset out;
  out.design = grid;
  out.truth = truth;
  if (options.s_test) {
    out.s_test = *options.s_test;
  } else {
    Rng rng(derive_seed(options.seed, kStreamTestInput, 0));
    for (Eigen::Index a = 0; a < 2; ++a) {
      std::uniform_real_distribution<double> u(grid.col(a).minCoeff(), grid.col(a).maxCoeff());
      out.s_test[a] = u(rng);
    }
  }

  const std::vector<SpdMatrix> factors{
      build_sqe_matrix(append_point(grid, out.s_test), truth.kernel(), options.relative_jitter),
      SpdMatrix::factorize(ar1_correlation(options.m2, options.sigma2_coefficient)),
      build_sigma3(truth.sigma3()),
  };

  const std::size_t n = static_cast<std::size_t>(grid.rows());
  const std::vector<std::size_t> dims{n + 1, options.m2, options.m3};
  Rng rng(derive_seed(options.seed, kStreamNoise, 0));
  const DenseTensor z = standard_normal_tensor(dims, rng);
  out.full = colorize(z, DenseTensor(dims), factors);

  std::vector<DenseTensor> train_slices;
  train_slices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) train_slices.push_back(slice(out.full, 0, i));
  out.training = stack(train_slices, 0);
  const DenseTensor test = slice(out.full, 0, n);
  out.test_slice = stack(std::span(&test, 1), 0);
  return out;
}

}  // namespace tvgp
