#pragma once
// Independent reference implementations used by the tests. Deliberately naive:
// index loops, dense Kronecker matrices, Gaussian elimination, exhaustive search.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tvgp/tensor.hpp"

namespace oracle {

inline tvgp::DenseTensor random_tensor(std::vector<std::size_t> dims, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  tvgp::DenseTensor t(std::move(dims));
  for (auto& x : t.data()) x = n(rng);
  return t;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n(rng);
  return m;
}

// A A^T + n I, comfortably positive definite.
inline Eigen::MatrixXd random_spd(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = random_matrix(n, n, rng);
  return a * a.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
}

// Rank-3 mode product by explicit index loops.
inline tvgp::DenseTensor mode_product3(const tvgp::DenseTensor& t, const Eigen::MatrixXd& m,
                                       std::size_t mode) {
  auto dims = t.dims();
  dims[mode] = static_cast<std::size_t>(m.rows());
  tvgp::DenseTensor out(dims);
  for (std::size_t i = 0; i < dims[0]; ++i)
    for (std::size_t j = 0; j < dims[1]; ++j)
      for (std::size_t k = 0; k < dims[2]; ++k) {
        double acc = 0.0;
        const std::size_t idx[3] = {i, j, k};
        const auto a = static_cast<Eigen::Index>(idx[mode]);
        for (std::size_t x = 0; x < t.dim(mode); ++x) {
          std::size_t src[3] = {i, j, k};
          src[mode] = x;
          acc += m(a, static_cast<Eigen::Index>(x)) * t(src[0], src[1], src[2]);
        }
        out(i, j, k) = acc;
      }
  return out;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Gaussian elimination with partial pivoting; returns log|det| and solves A x = b.
struct Elimination {
  double log_abs_det = 0.0;
  Eigen::VectorXd solution;
};

inline Elimination eliminate(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const Eigen::Index n = a.rows();
  Elimination e;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    a.row(c).swap(a.row(piv));
    std::swap(b(c), b(piv));
    e.log_abs_det += std::log(std::abs(a(c, c)));
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      a.row(r) -= f * a.row(c);
      b(r) -= f * b(c);
    }
  }
  e.solution = Eigen::VectorXd(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double acc = b(r);
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= a(r, c) * e.solution(c);
    e.solution(r) = acc / a(r, r);
  }
  return e;
}

// Dense multivariate normal log density, covariance never factorized by Cholesky.
inline double mvn_log_density(const Eigen::VectorXd& x, const Eigen::MatrixXd& cov) {
  const auto e = eliminate(cov, x);
  const double n = static_cast<double>(x.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * e.log_abs_det -
         0.5 * x.dot(e.solution);
}

// Laplace expansion along the first row.
inline double cofactor_det(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    det += ((j % 2) ? -1.0 : 1.0) * a(0, j) * cofactor_det(minor);
  }
  return det;
}

// e_bc transcribed with explicit sums: slices v^(b) are m1 x m3, t indexes columns.
inline Eigen::MatrixXd empirical_sigma2(const tvgp::DenseTensor& d) {
  const std::size_t m1 = d.dim(0), m2 = d.dim(1), m3 = d.dim(2);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m2),
                                            static_cast<Eigen::Index>(m2));
  for (std::size_t b = 0; b < m2; ++b)
    for (std::size_t c = 0; c < m2; ++c) {
      double outer = 0.0;
      for (std::size_t t = 0; t < m3; ++t) {
        double mean_b = 0.0, mean_c = 0.0;
        for (std::size_t s = 0; s < m1; ++s) {
          mean_b += d(s, b, t);
          mean_c += d(s, c, t);
        }
        mean_b /= static_cast<double>(m1);
        mean_c /= static_cast<double>(m1);
        double inner = 0.0;
        for (std::size_t s = 0; s < m1; ++s) inner += (d(s, b, t) - mean_b) * (d(s, c, t) - mean_c);
        outer += inner / static_cast<double>(m1);
      }
      e(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c)) =
          outer / static_cast<double>(m3 - 1);
    }
  return e;
}

struct Window {
  double lower;
  double upper;
};

// Tries every pair of sample values as interval endpoints and keeps the
// narrowest one covering at least `need` samples; ties go to the smaller lower end.
inline Window exhaustive_hpd(const std::vector<double>& samples, std::size_t need) {
  Window best{0.0, 0.0};
  double best_width = std::numeric_limits<double>::infinity();
  for (double lo : samples)
    for (double hi : samples) {
      if (hi < lo) continue;
      const auto inside = static_cast<std::size_t>(
          std::count_if(samples.begin(), samples.end(), [&](double x) { return x >= lo && x <= hi; }));
      if (inside < need) continue;
      const double w = hi - lo;
      if (w < best_width || (w == best_width && lo < best.lower)) {
        best_width = w;
        best = {lo, hi};
      }
    }
  return best;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
