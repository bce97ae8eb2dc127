#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "tvgp/covariance.hpp"
#include "tvgp/tensor.hpp"

namespace tvgp {

/// Tensor text format:
///
///   # optional comment lines
///   dims: m1 m2 ... mk
///   <prod(m) whitespace-separated reals, mode 0 fastest>
DenseTensor read_tensor(std::istream& in);
void write_tensor(std::ostream& out, const DenseTensor& t);
DenseTensor load_tensor(const std::filesystem::path& path);
void save_tensor(const std::filesystem::path& path, const DenseTensor& t);

/// Design CSV with header `s1,s2` and one point per row.
DesignPoints read_design(std::istream& in);
void write_design(std::ostream& out, const DesignPoints& design);
DesignPoints load_design(const std::filesystem::path& path);
void save_design(const std::filesystem::path& path, const DesignPoints& design);

/// Throws ShapeError unless the design has one row per mode-0 slice of `t`
/// (plus `extra_slices` unlabelled test slices).
void check_design_matches(const DenseTensor& t, const DesignPoints& design,
                          std::size_t extra_slices = 0);

/// Plain CSV dump of a matrix, for debugging covariance factors.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// Ordered `key = value` entries; `#` starts a comment, blank lines are skipped.
struct KeyValueEntry {
  std::string key;
  std::string value;
  std::size_t line;
};
std::vector<KeyValueEntry> read_key_values(std::istream& in);
void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv,
                      const std::string& comment = {});

/// %.17g formatting, enough digits to round-trip a double.
std::string format_double(double x);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace tvgp
