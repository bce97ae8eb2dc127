#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tvgp {

/// Dense real tensor with the first index varying fastest in memory.
///
/// Mode indices are zero-based throughout the library: mode 0 is the
/// design-point mode, mode 1 the within-sheet row mode, mode 2 the
/// velocity-component mode. A tensor with no dims is a rank-0 scalar
/// (only produced by slicing a rank-1 tensor).
class DenseTensor {
 public:
  DenseTensor() : data_(1, 0.0) {}
  /// Zero-filled tensor. Every dim must be >= 1.
  explicit DenseTensor(std::vector<std::size_t> dims);
  DenseTensor(std::vector<std::size_t> dims, std::vector<double> data);

  static DenseTensor scalar(double value);

  [[nodiscard]] std::size_t rank() const noexcept { return dims_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t dim(std::size_t mode) const;
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }

  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> index) const;

  [[nodiscard]] double at(std::span<const std::size_t> index) const {
    return data_[flat_index(index)];
  }
  [[nodiscard]] double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  double& at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }
  double& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Unchecked rank-3 accessors for the hot paths.
  [[nodiscard]] double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[i + dims_[0] * (j + dims_[1] * k)];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[i + dims_[0] * (j + dims_[1] * k)];
  }

  bool operator==(const DenseTensor&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> data_;
};

/// Product of elements of `dims` (1 for an empty list).
std::size_t element_count(std::span<const std::size_t> dims);

/// t ×_mode mat. `mat` is r × dims[mode]; the result has dims[mode] replaced by r.
DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& mat, std::size_t mode);

double frobenius_norm_sq(const DenseTensor& t);

/// Flat copy in storage order (mode 0 fastest).
Eigen::VectorXd vectorize(const DenseTensor& t);
DenseTensor devectorize(const Eigen::VectorXd& v, std::vector<std::size_t> dims);

DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor subtract(const DenseTensor& a, const DenseTensor& b);

/// Sub-tensor with `mode` fixed at `index`; rank drops by one.
DenseTensor slice(const DenseTensor& t, std::size_t mode, std::size_t index);

/// Inverse of slicing: stacks equal-shaped rank-(k-1) tensors along a new `mode`.
DenseTensor stack(std::span<const DenseTensor> slices, std::size_t mode);

/// Joins two tensors along an existing mode; all other dims must agree.
DenseTensor concatenate(const DenseTensor& a, const DenseTensor& b, std::size_t mode);

}  // namespace tvgp
