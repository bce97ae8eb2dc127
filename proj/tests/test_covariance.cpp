#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tvgp/covariance.hpp"
#include "tvgp/errors.hpp"
#include "tvgp/synthetic.hpp"

using tvgp::DenseTensor;
using tvgp::SpdMatrix;

namespace {

tvgp::SqeKernelParams kernel(double q1, double q2) { return {Eigen::Vector2d(q1, q2)}; }

}  // namespace

TEST_CASE("SQE matrix of a single point is one plus jitter") {
  const Eigen::MatrixXd pt = Eigen::RowVector2d(1.9, 0.4);
  const SpdMatrix m = tvgp::build_sqe_matrix(pt, kernel(3.0, 7.0));
  CHECK(m.order() == 1);
  CHECK(m.matrix()(0, 0) == doctest::Approx(1.0 + 1e-8).epsilon(1e-15));
  CHECK(m.jitter() == doctest::Approx(1e-8));
}

TEST_CASE("SQE off-diagonal follows the exponent by hand") {
  Eigen::MatrixXd pts(2, 2);
  pts << 0, 0, 1, 0;
  const Eigen::MatrixXd k = tvgp::sqe_kernel_matrix(pts, kernel(std::log(2.0), 1.0));
  CHECK(k(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(k(1, 0) == k(0, 1));
  CHECK(k(0, 0) == 1.0);
  CHECK(k(1, 1) == 1.0);
}

TEST_CASE("SQE matrix tends to the identity for large q") {
  const auto grid = tvgp::make_polar_grid(3, 3);
  const Eigen::MatrixXd k = tvgp::sqe_kernel_matrix(grid, kernel(1e5, 1e5));
  CHECK((k - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("SQE kernel rejects nonpositive or mis-sized q") {
  const auto grid = tvgp::make_polar_grid(2, 2);
  CHECK_THROWS_AS(tvgp::build_sqe_matrix(grid, kernel(0.0, 1.0)), tvgp::DomainError);
  CHECK_THROWS_AS(tvgp::build_sqe_matrix(grid, kernel(1.0, -2.0)), tvgp::DomainError);
  CHECK_THROWS_AS(tvgp::build_sqe_matrix(grid, {Eigen::Vector3d(1, 1, 1)}), tvgp::DomainError);
}

TEST_CASE("duplicate design points without jitter fail with a pivot") {
  Eigen::MatrixXd pts(3, 2);
  pts << 1.8, 0.2, 2.0, 0.5, 1.8, 0.2;
  try {
    (void)tvgp::build_sqe_matrix(pts, kernel(1.0, 1.0), 0.0);
    FAIL("expected a factorization error");
  } catch (const tvgp::FactorizationError& e) {
    CHECK(e.pivot() == 2);
  }
  // With the default jitter the matrix is rescued.
  CHECK_NOTHROW((void)tvgp::build_sqe_matrix(pts, kernel(1.0, 1.0)));
}

TEST_CASE("SQE matrix is permutation equivariant") {
  std::mt19937_64 rng(11);
  const auto grid = tvgp::make_polar_grid(3, 4);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(grid.rows());
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + perm.indices().size(), rng);
  const Eigen::MatrixXd permuted_points = perm * grid;
  const Eigen::MatrixXd a = tvgp::sqe_kernel_matrix(grid, kernel(40.0, 3.0));
  const Eigen::MatrixXd b = tvgp::sqe_kernel_matrix(permuted_points, kernel(40.0, 3.0));
  CHECK((perm * a * perm.transpose() - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("empirical Sigma2 of a tensor constant along mode 0 is zero") {
  std::mt19937_64 rng(12);
  const DenseTensor base = oracle::random_tensor({1, 3, 2}, rng);
  DenseTensor d({4, 3, 2});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k) d(i, j, k) = base(0, j, k);
  CHECK(tvgp::empirical_sigma2_matrix(d).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("identical mode-1 slices give equal empirical entries") {
  std::mt19937_64 rng(13);
  DenseTensor d = oracle::random_tensor({5, 2, 2}, rng);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 2; ++k) d(i, 1, k) = d(i, 0, k);
  const Eigen::MatrixXd e = tvgp::empirical_sigma2_matrix(d);
  CHECK(e(0, 0) == doctest::Approx(e(0, 1)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(e(0, 1)).epsilon(1e-14));
}

TEST_CASE("empirical Sigma2 matches the transcribed formula") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseTensor d = oracle::random_tensor({4, 3, 2}, rng);
    const Eigen::MatrixXd got = tvgp::empirical_sigma2_matrix(d);
    const Eigen::MatrixXd want = oracle::empirical_sigma2(d);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(got == got.transpose());
  }
}

TEST_CASE("empirical Sigma2 ignores a mode-0-constant shift") {
  std::mt19937_64 rng(15);
  const DenseTensor d = oracle::random_tensor({6, 4, 3}, rng);
  const DenseTensor shift_row = oracle::random_tensor({1, 4, 3}, rng);
  DenseTensor shifted = d;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 3; ++k) shifted(i, j, k) += 10.0 * shift_row(0, j, k);
  const Eigen::MatrixXd a = tvgp::empirical_sigma2_matrix(d);
  const Eigen::MatrixXd b = tvgp::empirical_sigma2_matrix(shifted);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empirical Sigma2 needs two entries along the last mode") {
  CHECK_THROWS_AS(tvgp::empirical_sigma2(DenseTensor({4, 3, 1})), tvgp::PreconditionError);
}

TEST_CASE("Sigma3 construction") {
  const SpdMatrix id = tvgp::build_sigma3({1.0, 1.0, 0.0});
  CHECK(id.matrix() == Eigen::Matrix2d::Identity());

  const SpdMatrix m = tvgp::build_sigma3({4.0, 1.0, 0.5});
  CHECK(m.matrix()(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.matrix()(1, 0) == m.matrix()(0, 1));

  const double rho = 0.999999;
  const SpdMatrix near = tvgp::build_sigma3({1.0, 1.0, rho});
  CHECK(near.log_det() == doctest::Approx(std::log(1.0 - rho * rho)).epsilon(1e-6));

  CHECK_THROWS_AS(tvgp::build_sigma3({1.0, 1.0, 1.0}), tvgp::DomainError);
  CHECK_THROWS_AS(tvgp::build_sigma3({1.0, 1.0, -1.2}), tvgp::DomainError);
  CHECK_THROWS_AS(tvgp::build_sigma3({0.0, 1.0, 0.0}), tvgp::DomainError);
  CHECK_THROWS_AS(tvgp::build_sigma3({1.0, -1.0, 0.0}), tvgp::DomainError);
}

TEST_CASE("SpdMatrix invariants") {
  std::mt19937_64 rng(16);
  for (Eigen::Index n = 1; n <= 4; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXd a = oracle::random_spd(n, rng);
      const SpdMatrix m = SpdMatrix::factorize(a);
      const Eigen::MatrixXd l = m.cholesky();
      CHECK((l * l.transpose() - a).norm() <= 1e-10 * a.norm());
      CHECK(l.isLowerTriangular());
      CHECK(l.diagonal().minCoeff() > 0.0);
      CHECK(m.log_det() == doctest::Approx(2.0 * l.diagonal().array().log().sum()).epsilon(1e-14));
      CHECK(oracle::rel_err(m.log_det(), std::log(oracle::cofactor_det(a))) < 1e-10);
    }
  }
}

TEST_CASE("SpdMatrix rejects malformed input") {
  Eigen::Matrix2d asym;
  asym << 2, 1, 0, 2;
  CHECK_THROWS_AS(SpdMatrix::factorize(asym), tvgp::ShapeError);
  CHECK_THROWS_AS(SpdMatrix::factorize(Eigen::MatrixXd::Ones(2, 3)), tvgp::ShapeError);
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(SpdMatrix::factorize(indefinite), tvgp::FactorizationError);
  Eigen::Matrix2d nan_entry;
  nan_entry << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SpdMatrix::factorize(nan_entry), tvgp::NumericalError);
}

TEST_CASE("whitening with identity factors is a no-op") {
  std::mt19937_64 rng(17);
  const DenseTensor t = oracle::random_tensor({3, 4, 2}, rng);
  const SpdMatrix f[3] = {SpdMatrix::factorize(Eigen::MatrixXd::Identity(3, 3)),
                          SpdMatrix::factorize(Eigen::MatrixXd::Identity(4, 4)),
                          SpdMatrix::factorize(Eigen::MatrixXd::Identity(2, 2))};
  CHECK(tvgp::whiten(t, f) == t);
}

TEST_CASE("whitening inverts colorizing") {
  std::mt19937_64 rng(18);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseTensor z = oracle::random_tensor({3, 4, 2}, rng);
    const DenseTensor mean = oracle::random_tensor({3, 4, 2}, rng);
    const SpdMatrix f[3] = {SpdMatrix::factorize(oracle::random_spd(3, rng)),
                            SpdMatrix::factorize(oracle::random_spd(4, rng)),
                            SpdMatrix::factorize(oracle::random_spd(2, rng))};
    const DenseTensor back = tvgp::whiten(tvgp::subtract(tvgp::colorize(z, mean, f), mean), f);
    const Eigen::VectorXd diff = tvgp::vectorize(back) - tvgp::vectorize(z);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("whitened norm equals the Kronecker quadratic form") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseTensor t = oracle::random_tensor({2, 2, 2}, rng);
    const Eigen::MatrixXd s1 = oracle::random_spd(2, rng);
    const Eigen::MatrixXd s2 = oracle::random_spd(2, rng);
    const Eigen::MatrixXd s3 = oracle::random_spd(2, rng);
    const SpdMatrix f[3] = {SpdMatrix::factorize(s1), SpdMatrix::factorize(s2),
                            SpdMatrix::factorize(s3)};
    const Eigen::VectorXd v = tvgp::vectorize(t);
    const auto e = oracle::eliminate(oracle::kron(oracle::kron(s3, s2), s1), v);
    CHECK(oracle::rel_err(tvgp::frobenius_norm_sq(tvgp::whiten(t, f)), v.dot(e.solution)) < 1e-12);
  }
}

TEST_CASE("whitening checks factor orders") {
  const DenseTensor t({3, 4, 2});
  const SpdMatrix id2 = SpdMatrix::factorize(Eigen::MatrixXd::Identity(2, 2));
  const SpdMatrix id3 = SpdMatrix::factorize(Eigen::MatrixXd::Identity(3, 3));
  const SpdMatrix wrong[3] = {id3, id3, id2};
  CHECK_THROWS_AS(tvgp::whiten(t, wrong), tvgp::ShapeError);
  const SpdMatrix too_few[2] = {id3, id2};
  CHECK_THROWS_AS(tvgp::whiten(t, too_few), tvgp::ShapeError);
}
