#include "tvgp/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tvgp/errors.hpp"

namespace tvgp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_comment_or_blank(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

double parse_real(const std::string& token, std::size_t line, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != token.size()) {
    throw ParseError(std::string(what) + " line " + std::to_string(line) + ": '" + token +
                         "' is not a number",
                     line);
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

DenseTensor read_tensor(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> dims;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ss(trim(line));
    std::string tag;
    ss >> tag;
    if (tag != "dims:") {
      throw ParseError("tensor line " + std::to_string(line_no) +
                           ": expected 'dims: m1 m2 ...' header",
                       line_no);
    }
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used != tok.size() || v < 1) {
        throw ParseError("tensor line " + std::to_string(line_no) + ": bad dimension '" + tok +
                             "'",
                         line_no);
      }
      dims.push_back(static_cast<std::size_t>(v));
    }
    if (dims.empty()) {
      throw ParseError("tensor line " + std::to_string(line_no) + ": no dimensions given",
                       line_no);
    }
    break;
  }
  if (dims.empty()) throw ParseError("tensor file has no 'dims:' header", line_no);

  std::vector<double> data;
  data.reserve(element_count(dims));
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) data.push_back(parse_real(tok, line_no, "tensor"));
  }
  if (data.size() != element_count(dims)) {
    throw ParseError("tensor has " + std::to_string(data.size()) + " values but dims require " +
                         std::to_string(element_count(dims)),
                     line_no);
  }
  return DenseTensor(std::move(dims), std::move(data));
}

void write_tensor(std::ostream& out, const DenseTensor& t) {
  out << "dims:";
  for (auto d : t.dims()) out << ' ' << d;
  out << '\n';
  const std::size_t per_line = t.rank() ? t.dim(0) : 1;
  const auto data = t.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << format_double(data[i]) << ((i + 1) % per_line == 0 ? '\n' : ' ');
  }
}

DenseTensor load_tensor(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_tensor(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  auto out = open_output(path);
  write_tensor(out, t);
}

DesignPoints read_design(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::array<double, 2>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const std::string t = trim(line);
    if (!have_header) {
      if (t != "s1,s2") {
        throw ParseError("design line " + std::to_string(line_no) + ": expected header 's1,s2'",
                         line_no);
      }
      have_header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ParseError("design line " + std::to_string(line_no) + ": expected two fields",
                       line_no);
    }
    rows.push_back({parse_real(trim(t.substr(0, comma)), line_no, "design"),
                    parse_real(trim(t.substr(comma + 1)), line_no, "design")});
  }
  if (!have_header) throw ParseError("design file has no header", line_no);
  DesignPoints design(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    design(static_cast<Eigen::Index>(i), 1) = rows[i][1];
  }
  return design;
}

void write_design(std::ostream& out, const DesignPoints& design) {
  out << "s1,s2\n";
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    out << format_double(design(i, 0)) << ',' << format_double(design(i, 1)) << '\n';
  }
}

DesignPoints load_design(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_design(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void save_design(const std::filesystem::path& path, const DesignPoints& design) {
  auto out = open_output(path);
  write_design(out, design);
}

void check_design_matches(const DenseTensor& t, const DesignPoints& design,
                          std::size_t extra_slices) {
  if (t.rank() != 3) {
    throw ShapeError("data tensor must be rank 3, got rank " + std::to_string(t.rank()));
  }
  if (static_cast<std::size_t>(design.rows()) + extra_slices != t.dim(0)) {
    throw ShapeError("design has " + std::to_string(design.rows()) +
                     " points but the tensor has " + std::to_string(t.dim(0)) +
                     " design-mode slices");
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::vector<KeyValueEntry> read_key_values(std::istream& in) {
  std::vector<KeyValueEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    }
    KeyValueEntry e{trim(t.substr(0, eq)), trim(t.substr(eq + 1)), line_no};
    if (e.key.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty key", line_no);
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv,
                      const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

}  // namespace tvgp
