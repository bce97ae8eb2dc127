#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "tvgp/covariance.hpp"
#include "tvgp/posterior.hpp"
#include "tvgp/sampler.hpp"
#include "tvgp/tensor.hpp"

namespace tvgp {

/// mean + z ×_0 L_0 ×_1 L_1 ... with L_p the Cholesky factor of factors[p].
DenseTensor colorize(const DenseTensor& z, const DenseTensor& mean,
                     std::span<const SpdMatrix> factors);

/// Tensor of i.i.d. N(0, 1) entries, filled in storage order.
DenseTensor standard_normal_tensor(std::vector<std::size_t> dims, Rng& rng);

/// Cell centroids of a regular polar grid, radial index outer, angular inner.
/// Column 0 is the radial coordinate, column 1 the angle.
DesignPoints make_polar_grid(std::size_t n_r, std::size_t n_phi, Bounds r_range = {1.7, 2.3},
                             Bounds phi_range = {0.0, 1.5707963267948966});

/// Entry (b, c) = coefficient^|b - c|.
Eigen::MatrixXd ar1_correlation(std::size_t order, double coefficient = 0.5);

/// Trace of Sigma3 that a fit with the replicate-mean and empirical-Sigma2
/// plug-ins recovers when Sigma1 is known:
///
///   (m3 - 1) tr(Sigma1^{-1} C Sigma1 C) / tr(C Sigma1 C),  C = I - 11^T / m1.
///
/// The empirical Sigma2 absorbs the overall scale of the data, so only Sigma3
/// matrices with this trace are recoverable from synthetic draws.
double identifiable_sigma3_trace(const SpdMatrix& sigma1, std::size_t m3);

struct SyntheticOptions {
  std::size_t m2 = 50;
  std::size_t m3 = 2;
  std::uint64_t seed = 0;
  /// Drawn uniformly over the bounding box of the grid when unset.
  std::optional<Eigen::Vector2d> s_test;
  double sigma2_coefficient = 0.5;
  double relative_jitter = kDefaultRelativeJitter;
};

struct SyntheticDataset {
  DesignPoints design;   // training inputs, n x 2
  DenseTensor full;      // (n + 1) x m2 x m3, test slice last
  DenseTensor training;  // n x m2 x m3
  DenseTensor test_slice;  // 1 x m2 x m3
  Eigen::Vector2d s_test;
  GpScalars truth;
};

/// One tensor-normal draw (zero mean) over grid + {s_test} with Sigma1 from
/// the true q, an AR(1) Sigma2 and Sigma3 from the true (sigma11, sigma22, rho);
/// the s_test slice is split off as test data.
SyntheticDataset generate_dataset(const DesignPoints& grid, const GpScalars& truth,
                                  const SyntheticOptions& options);

}  // namespace tvgp
