#include "tvgp/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "tvgp/errors.hpp"

namespace tvgp {

namespace {

std::string dims_string(std::span<const std::size_t> dims) {
  std::string out = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(dims[i]);
  }
  return out + ")";
}

void check_same_dims(const DenseTensor& a, const DenseTensor& b, const char* op) {
  if (a.dims() != b.dims()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + dims_string(a.dims()) + " vs " +
                     dims_string(b.dims()));
  }
}

// Splits the storage around `mode` into (elements before, extent, elements after).
struct ModeSplit {
  std::size_t left;
  std::size_t extent;
  std::size_t right;
};

ModeSplit split_at(std::span<const std::size_t> dims, std::size_t mode) {
  return {element_count(dims.first(mode)), dims[mode], element_count(dims.subspan(mode + 1))};
}

}  // namespace

std::size_t element_count(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

DenseTensor::DenseTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (std::find(dims_.begin(), dims_.end(), std::size_t{0}) != dims_.end()) {
    throw ShapeError("DenseTensor: every dimension must be >= 1, got " + dims_string(dims_));
  }
  data_.assign(element_count(dims_), 0.0);
}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<double> data)
    : DenseTensor(std::move(dims)) {
  if (data.size() != data_.size()) {
    throw ShapeError("DenseTensor: data length " + std::to_string(data.size()) +
                     " does not match dims " + dims_string(dims_));
  }
  data_ = std::move(data);
}

DenseTensor DenseTensor::scalar(double value) {
  DenseTensor t;
  t.data_[0] = value;
  return t;
}

std::size_t DenseTensor::dim(std::size_t mode) const {
  if (mode >= dims_.size()) {
    throw ShapeError("mode " + std::to_string(mode) + " out of range for rank " +
                     std::to_string(dims_.size()));
  }
  return dims_[mode];
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) {
    throw ShapeError("index has " + std::to_string(index.size()) + " components, tensor rank is " +
                     std::to_string(dims_.size()));
  }
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (std::size_t p = 0; p < dims_.size(); ++p) {
    if (index[p] >= dims_[p]) {
      throw ShapeError("index " + std::to_string(index[p]) + " out of range at mode " +
                       std::to_string(p) + " (extent " + std::to_string(dims_[p]) + ")");
    }
    flat += index[p] * stride;
    stride *= dims_[p];
  }
  return flat;
}

DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& mat, std::size_t mode) {
  if (mode >= t.rank()) {
    throw ShapeError("mode_product: mode " + std::to_string(mode) + " out of range for rank " +
                     std::to_string(t.rank()));
  }
  if (static_cast<std::size_t>(mat.cols()) != t.dim(mode)) {
    throw ShapeError("mode_product: mode " + std::to_string(mode) + " has extent " +
                     std::to_string(t.dim(mode)) + " but matrix has " + std::to_string(mat.cols()) +
                     " columns");
  }
  const auto [left, extent, right] = split_at(t.dims(), mode);
  const auto rows = static_cast<std::size_t>(mat.rows());

  std::vector<std::size_t> out_dims = t.dims();
  out_dims[mode] = rows;
  DenseTensor out(std::move(out_dims));

  // Each slab over (left, mode) is a column-major left x extent matrix.
  using Slab = Eigen::Map<const Eigen::MatrixXd>;
  using OutSlab = Eigen::Map<Eigen::MatrixXd>;
  const auto l = static_cast<Eigen::Index>(left);
  for (std::size_t r = 0; r < right; ++r) {
    Slab in(t.data().data() + r * left * extent, l, static_cast<Eigen::Index>(extent));
    OutSlab res(out.data().data() + r * left * rows, l, static_cast<Eigen::Index>(rows));
    res.noalias() = in * mat.transpose();
  }
  return out;
}

double frobenius_norm_sq(const DenseTensor& t) {
  const auto d = t.data();
  return std::inner_product(d.begin(), d.end(), d.begin(), 0.0);
}

Eigen::VectorXd vectorize(const DenseTensor& t) {
  const auto d = t.data();
  return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

DenseTensor devectorize(const Eigen::VectorXd& v, std::vector<std::size_t> dims) {
  return DenseTensor(std::move(dims), std::vector<double>(v.data(), v.data() + v.size()));
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
  check_same_dims(a, b, "add");
  DenseTensor out = a;
  std::transform(a.data().begin(), a.data().end(), b.data().begin(), out.data().begin(),
                 std::plus<>());
  return out;
}

DenseTensor subtract(const DenseTensor& a, const DenseTensor& b) {
  check_same_dims(a, b, "subtract");
  DenseTensor out = a;
  std::transform(a.data().begin(), a.data().end(), b.data().begin(), out.data().begin(),
                 std::minus<>());
  return out;
}

DenseTensor slice(const DenseTensor& t, std::size_t mode, std::size_t index) {
  if (mode >= t.rank()) {
    throw ShapeError("slice: mode " + std::to_string(mode) + " out of range for rank " +
                     std::to_string(t.rank()));
  }
  if (index >= t.dim(mode)) {
    throw ShapeError("slice: index " + std::to_string(index) + " out of range at mode " +
                     std::to_string(mode) + " (extent " + std::to_string(t.dim(mode)) + ")");
  }
  const auto [left, extent, right] = split_at(t.dims(), mode);
  std::vector<std::size_t> out_dims = t.dims();
  out_dims.erase(out_dims.begin() + static_cast<std::ptrdiff_t>(mode));
  if (out_dims.empty()) return DenseTensor::scalar(t.data()[index]);

  DenseTensor out(std::move(out_dims));
  auto dst = out.data().begin();
  for (std::size_t r = 0; r < right; ++r) {
    const auto src = t.data().begin() + static_cast<std::ptrdiff_t>((r * extent + index) * left);
    dst = std::copy(src, src + static_cast<std::ptrdiff_t>(left), dst);
  }
  return out;
}

DenseTensor stack(std::span<const DenseTensor> slices, std::size_t mode) {
  if (slices.empty()) throw ShapeError("stack: no slices given");
  const auto& first = slices.front().dims();
  if (mode > first.size()) {
    throw ShapeError("stack: mode " + std::to_string(mode) + " out of range for slice rank " +
                     std::to_string(first.size()));
  }
  for (const auto& s : slices) {
    if (s.dims() != first) {
      throw ShapeError("stack: slice shape " + dims_string(s.dims()) + " differs from " +
                       dims_string(first));
    }
  }
  std::vector<std::size_t> out_dims = first;
  out_dims.insert(out_dims.begin() + static_cast<std::ptrdiff_t>(mode), slices.size());
  const std::size_t left = element_count(std::span(first).first(mode));
  const std::size_t right = element_count(std::span(first).subspan(mode));

  DenseTensor out(std::move(out_dims));
  auto dst = out.data().begin();
  for (std::size_t r = 0; r < right; ++r) {
    for (const auto& s : slices) {
      const auto src = s.data().begin() + static_cast<std::ptrdiff_t>(r * left);
      dst = std::copy(src, src + static_cast<std::ptrdiff_t>(left), dst);
    }
  }
  return out;
}

DenseTensor concatenate(const DenseTensor& a, const DenseTensor& b, std::size_t mode) {
  if (a.rank() != b.rank() || mode >= a.rank()) {
    throw ShapeError("concatenate: incompatible ranks or mode");
  }
  for (std::size_t p = 0; p < a.rank(); ++p) {
    if (p != mode && a.dim(p) != b.dim(p)) {
      throw ShapeError("concatenate: shape " + dims_string(a.dims()) + " vs " +
                       dims_string(b.dims()) + " differ outside mode " + std::to_string(mode));
    }
  }
  const auto sa = split_at(a.dims(), mode);
  const auto sb = split_at(b.dims(), mode);
  std::vector<std::size_t> out_dims = a.dims();
  out_dims[mode] += b.dim(mode);
  DenseTensor out(std::move(out_dims));
  auto dst = out.data().begin();
  for (std::size_t r = 0; r < sa.right; ++r) {
    const auto block_a = static_cast<std::ptrdiff_t>(sa.left * sa.extent);
    const auto block_b = static_cast<std::ptrdiff_t>(sb.left * sb.extent);
    const auto src_a = a.data().begin() + static_cast<std::ptrdiff_t>(r) * block_a;
    const auto src_b = b.data().begin() + static_cast<std::ptrdiff_t>(r) * block_b;
    dst = std::copy(src_a, src_a + block_a, dst);
    dst = std::copy(src_b, src_b + block_b, dst);
  }
  return out;
}

}  // namespace tvgp
