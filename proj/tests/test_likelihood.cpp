#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tvgp/errors.hpp"
#include "tvgp/likelihood.hpp"
#include "tvgp/synthetic.hpp"

using tvgp::DenseTensor;
using tvgp::SpdMatrix;

namespace {

// Dense-oracle log density of d - mean under Sigma3 (x) Sigma2 (x) Sigma1.
double dense_log_density(const DenseTensor& residual, const Eigen::MatrixXd& s1,
                         const Eigen::MatrixXd& s2, const Eigen::MatrixXd& s3) {
  return oracle::mvn_log_density(tvgp::vectorize(residual),
                                 oracle::kron(oracle::kron(s3, s2), s1));
}

tvgp::GpModel random_model(std::size_t m1, std::size_t m2, std::mt19937_64& rng) {
  const auto a = static_cast<Eigen::Index>(m1);
  const auto b = static_cast<Eigen::Index>(m2);
  return {oracle::random_tensor({m1, m2, 2}, rng), SpdMatrix::factorize(oracle::random_spd(a, rng)),
          SpdMatrix::factorize(oracle::random_spd(b, rng)),
          SpdMatrix::factorize(oracle::random_spd(2, rng))};
}

}  // namespace

TEST_CASE("mean estimate averages over mode 0") {
  std::mt19937_64 rng(20);
  DenseTensor constant({3, 2, 2});
  const DenseTensor row = oracle::random_tensor({1, 2, 2}, rng);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) constant(i, j, k) = row(0, j, k);
  CHECK(tvgp::estimate_mean(constant) == constant);

  const DenseTensor two({2, 1, 1}, {1.0, 3.0});
  const DenseTensor m = tvgp::estimate_mean(two);
  CHECK(m.data()[0] == 2.0);
  CHECK(m.data()[1] == 2.0);

  const DenseTensor d = oracle::random_tensor({5, 3, 2}, rng);
  const DenseTensor r = tvgp::subtract(d, tvgp::estimate_mean(d));
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 2; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < 5; ++i) sum += r(i, j, k);
      CHECK(std::abs(sum) < 1e-12);
    }
}

TEST_CASE("scalar standard normal at zero") {
  const SpdMatrix one = SpdMatrix::factorize(Eigen::MatrixXd::Ones(1, 1));
  const tvgp::GpModel model{DenseTensor({1, 1, 1}), one, one, one};
  CHECK(tvgp::log_likelihood(DenseTensor({1, 1, 1}), model) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("log likelihood matches the dense Kronecker density") {
  std::mt19937_64 rng(21);
  for (std::size_t m1 : {2u, 3u}) {
    for (int rep = 0; rep < 60; ++rep) {
      const tvgp::GpModel model = random_model(m1, 2, rng);
      const DenseTensor d = oracle::random_tensor({m1, 2, 2}, rng);
      const double got = tvgp::log_likelihood(d, model);
      const double want = dense_log_density(tvgp::subtract(d, model.mean), model.sigma1.matrix(),
                                            model.sigma2.matrix(), model.sigma3.matrix());
      CHECK(oracle::rel_err(got, want) < 1e-10);
    }
  }
}

TEST_CASE("scaling Sigma3 shifts the determinant term by m/2 log c") {
  std::mt19937_64 rng(22);
  const DenseTensor zero({3, 2, 2});
  const tvgp::GpModel model = random_model(3, 2, rng);
  const double c = 3.7;
  tvgp::GpModel scaled = model;
  scaled.sigma3 = SpdMatrix::factorize(c * model.sigma3.matrix());
  scaled.mean = zero;
  tvgp::GpModel base = model;
  base.mean = zero;
  // With zero residual only the determinant terms differ.
  const double m = 12.0;
  CHECK(tvgp::log_likelihood(zero, scaled) - tvgp::log_likelihood(zero, base) ==
        doctest::Approx(-(m / 4.0) * 2.0 * std::log(c)).epsilon(1e-12));
}

TEST_CASE("log likelihood is invariant under relabelling design slices") {
  std::mt19937_64 rng(23);
  const tvgp::GpModel model = random_model(4, 3, rng);
  const DenseTensor d = oracle::random_tensor({4, 3, 2}, rng);
  const std::vector<std::size_t> order = {2, 0, 3, 1};
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, 4);
  for (std::size_t i = 0; i < 4; ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(order[i])) = 1.0;
  tvgp::GpModel permuted = model;
  permuted.sigma1 = SpdMatrix::factorize(p * model.sigma1.matrix() * p.transpose());
  permuted.mean = tvgp::mode_product(model.mean, p, 0);
  const double a = tvgp::log_likelihood(d, model);
  const double b = tvgp::log_likelihood(tvgp::mode_product(d, p, 0), permuted);
  CHECK(oracle::rel_err(a, b) < 1e-10);
}

TEST_CASE("log likelihood rejects mismatched shapes") {
  std::mt19937_64 rng(24);
  const tvgp::GpModel model = random_model(3, 2, rng);
  CHECK_THROWS_AS(tvgp::log_likelihood(DenseTensor({4, 2, 2}), model), tvgp::ShapeError);
}

TEST_CASE("non-finite data surfaces as a numerical error") {
  const SpdMatrix one = SpdMatrix::factorize(Eigen::MatrixXd::Ones(1, 1));
  const tvgp::GpModel model{DenseTensor({1, 1, 1}), one, one, one};
  const DenseTensor bad({1, 1, 1}, {std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(tvgp::log_likelihood(bad, model), tvgp::NumericalError);
}

TEST_CASE("augmented likelihood matches the dense oracle") {
  std::mt19937_64 rng(25);
  Eigen::MatrixXd design(2, 2);
  design << 1.8, 0.3, 2.1, 0.9;
  const tvgp::SqeKernelParams kernel{Eigen::Vector2d(4.0, 2.0)};
  const tvgp::Sigma3Params s3{0.8, 1.3, 0.25};
  for (int rep = 0; rep < 20; ++rep) {
    const DenseTensor d_star = oracle::random_tensor({3, 2, 2}, rng);
    const Eigen::Vector2d s_test(1.95, 0.5);
    const double got = tvgp::log_likelihood_augmented(d_star, s_test, design, kernel, s3);

    Eigen::MatrixXd pts(3, 2);
    pts << design, s_test.transpose();
    const Eigen::MatrixXd k = tvgp::sqe_kernel_matrix(pts, kernel);
    const Eigen::MatrixXd s1 = k + 1e-8 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd e2 = oracle::empirical_sigma2(d_star);
    e2.diagonal().array() += 1e-8 * e2.diagonal().mean();
    Eigen::Matrix2d sig3;
    sig3 << 0.8, 0.25 * std::sqrt(0.8 * 1.3), 0.25 * std::sqrt(0.8 * 1.3), 1.3;
    const double want =
        dense_log_density(tvgp::subtract(d_star, tvgp::estimate_mean(d_star)), s1, e2, sig3);
    CHECK(oracle::rel_err(got, want) < 1e-10);

    // Precomputed data path agrees bit for bit.
    const auto centered = tvgp::CenteredData::from(d_star);
    CHECK(tvgp::log_likelihood_augmented(centered, s_test, design, kernel, s3) == got);
  }
}

TEST_CASE("augmented likelihood reduces to the plain path") {
  std::mt19937_64 rng(26);
  const Eigen::MatrixXd design = Eigen::RowVector2d(1.9, 0.4);
  const Eigen::Vector2d s_test(2.05, 0.7);
  const tvgp::SqeKernelParams kernel{Eigen::Vector2d(3.0, 5.0)};
  const tvgp::Sigma3Params s3{1.1, 0.6, -0.3};
  const DenseTensor d = oracle::random_tensor({2, 3, 2}, rng);

  Eigen::MatrixXd both(2, 2);
  both << design, s_test.transpose();
  const auto centered = tvgp::CenteredData::from(d);
  const tvgp::GpModel model{tvgp::estimate_mean(d), tvgp::build_sqe_matrix(both, kernel),
                            centered.sigma2, tvgp::build_sigma3(s3)};
  CHECK(oracle::rel_err(tvgp::log_likelihood_augmented(d, s_test, design, kernel, s3),
                        tvgp::log_likelihood(d, model)) < 1e-12);
}

TEST_CASE("distant test input approaches the independent-slice likelihood") {
  std::mt19937_64 rng(27);
  Eigen::MatrixXd design(3, 2);
  design << 1.8, 0.2, 1.9, 0.3, 2.0, 0.25;
  const tvgp::SqeKernelParams kernel{Eigen::Vector2d(20.0, 20.0)};
  const tvgp::Sigma3Params s3{1.0, 1.0, 0.1};
  const DenseTensor d_star = oracle::random_tensor({4, 3, 2}, rng);
  const auto centered = tvgp::CenteredData::from(d_star);

  // Sigma1* with the test slice fully decoupled from the design block.
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4, 4);
  block.topLeftCorner(3, 3) = tvgp::sqe_kernel_matrix(design, kernel);
  block(3, 3) = 1.0;
  const double mean_diag = block.diagonal().mean();
  block.diagonal().array() += 1e-8 * mean_diag;
  const SpdMatrix f[3] = {SpdMatrix::factorize(block), centered.sigma2, tvgp::build_sigma3(s3)};
  const double limit = tvgp::tensor_normal_log_density(centered.residual, f);

  double previous_gap = std::numeric_limits<double>::infinity();
  for (double far : {2.1, 2.5, 3.5, 6.0}) {
    const double v = tvgp::log_likelihood_augmented(centered, Eigen::Vector2d(far, 0.25), design,
                                                    kernel, s3);
    const double gap = std::abs(v - limit);
    CHECK(gap <= previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap < 1e-9);
}

TEST_CASE("test input on top of a design point is rescued by jitter") {
  std::mt19937_64 rng(28);
  Eigen::MatrixXd design(2, 2);
  design << 1.8, 0.2, 2.0, 0.6;
  const DenseTensor d_star = oracle::random_tensor({3, 2, 2}, rng);
  const double v = tvgp::log_likelihood_augmented(d_star, Eigen::Vector2d(1.8, 0.2), design,
                                                  {Eigen::Vector2d(5.0, 5.0)}, {1.0, 1.0, 0.0});
  CHECK(std::isfinite(v));
}

TEST_CASE("likelihood is continuous in the GP scalars") {
  std::mt19937_64 rng(29);
  const auto grid = tvgp::make_polar_grid(2, 3);
  const DenseTensor d_star = oracle::random_tensor({7, 3, 2}, rng);
  const auto centered = tvgp::CenteredData::from(d_star);
  const Eigen::Vector2d s_test(2.0, 0.9);
  const auto eval = [&](double q11, double q22, double s11, double s22, double rho) {
    return tvgp::log_likelihood_augmented(centered, s_test, grid,
                                          {Eigen::Vector2d(q11, q22)}, {s11, s22, rho});
  };
  const double base = eval(30.0, 4.0, 0.7, 0.5, 0.2);
  const double h = 1e-6;
  CHECK(std::abs(eval(30.0 + h, 4.0, 0.7, 0.5, 0.2) - base) < 1e-3);
  CHECK(std::abs(eval(30.0, 4.0 + h, 0.7, 0.5, 0.2) - base) < 1e-3);
  CHECK(std::abs(eval(30.0, 4.0, 0.7 + h, 0.5, 0.2) - base) < 1e-3);
  CHECK(std::abs(eval(30.0, 4.0, 0.7, 0.5 + h, 0.2) - base) < 1e-3);
  CHECK(std::abs(eval(30.0, 4.0, 0.7, 0.5, 0.2 + h) - base) < 1e-3);
}
