#include "tvgp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "tvgp/errors.hpp"

namespace tvgp {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  return out;
}

}  // namespace

std::size_t hpd_window_size(std::size_t n, double mass) {
  // The small offset keeps products like 0.95 * 100 from rounding up to 96.
  const double w = std::ceil(mass * static_cast<double>(n) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(w, 1.0)), 1, n);
}

HpdInterval hpd(std::span<const double> samples, double mass) {
  if (samples.size() < 2) throw PreconditionError("HPD needs at least two samples");
  if (!(mass > 0.0 && mass < 1.0)) throw PreconditionError("HPD mass must lie in (0, 1)");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t w = hpd_window_size(sorted.size(), mass);

  std::size_t best = 0;
  double best_width = sorted[w - 1] - sorted[0];
  for (std::size_t i = 1; i + w <= sorted.size(); ++i) {
    const double width = sorted[i + w - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {sorted[best], sorted[best + w - 1], mass};
}

std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bins) {
  if (bins == 0) throw PreconditionError("histogram needs at least one bin");
  if (samples.empty()) throw PreconditionError("histogram of an empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(bins);

  std::vector<HistogramBin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out[k] = {lo + (static_cast<double>(k) + 0.5) * width, 0};
  }
  for (double x : samples) {
    std::size_t k = 0;
    if (width > 0.0) {
      k = std::min(bins - 1, static_cast<std::size_t>(std::floor((x - lo) / width)));
    }
    ++out[k].count;
  }
  return out;
}

double mode_estimate(std::span<const double> samples, std::size_t bins) {
  const auto h = histogram(samples, bins);
  const auto it = std::max_element(h.begin(), h.end(), [](const auto& a, const auto& b) {
    return a.count < b.count;
  });
  return it->center;
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_center,count\n";
  char buf[48];
  for (const auto& b : bins) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu\n", b.center, b.count);
    out << buf;
  }
}

std::optional<HpdInterval> HpdReport::find(const std::string& parameter,
                                           const std::string& scheme) const {
  const auto col = std::find(schemes.begin(), schemes.end(), scheme);
  if (col == schemes.end()) return std::nullopt;
  for (const auto& row : rows) {
    if (row.parameter == parameter) {
      return row.intervals.at(static_cast<std::size_t>(col - schemes.begin()));
    }
  }
  return std::nullopt;
}

void write_report(std::ostream& out, const HpdReport& report) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# hpd_mass %.6g\n", report.mass);
  out << buf << "parameter";
  for (const auto& s : report.schemes) out << '\t' << s;
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.parameter;
    for (const auto& iv : row.intervals) {
      if (iv) {
        std::snprintf(buf, sizeof buf, "\t[%.10g, %.10g]", iv->lower, iv->upper);
        out << buf;
      } else {
        out << "\t-";
      }
    }
    out << '\n';
  }
}

HpdReport read_report(std::istream& in) {
  HpdReport report;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      double mass = 0.0;
      if (ss >> key >> mass && key == "hpd_mass") report.mass = mass;
      continue;
    }
    auto cells = split_tabs(line);
    if (!have_header) {
      if (cells.empty() || cells.front() != "parameter") {
        throw ParseError("report line " + std::to_string(line_no) +
                             ": expected a header starting with 'parameter'",
                         line_no);
      }
      report.schemes.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != report.schemes.size() + 1) {
      throw ParseError("report line " + std::to_string(line_no) + " has " +
                           std::to_string(cells.size()) + " fields, expected " +
                           std::to_string(report.schemes.size() + 1),
                       line_no);
    }
    HpdReport::Row row{cells.front(), {}};
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c] == "-") {
        row.intervals.emplace_back(std::nullopt);
        continue;
      }
      HpdInterval iv{0.0, 0.0, report.mass};
      int used = -1;
      if (std::sscanf(cells[c].c_str(), " [%lf , %lf ]%n", &iv.lower, &iv.upper, &used) != 2 ||
          used != static_cast<int>(cells[c].size())) {
        throw ParseError("report line " + std::to_string(line_no) + ": cannot parse interval '" +
                             cells[c] + "'",
                         line_no);
      }
      row.intervals.emplace_back(iv);
    }
    report.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("report has no header line", line_no);
  return report;
}

}  // namespace tvgp
