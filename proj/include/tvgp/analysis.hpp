#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tvgp {

inline constexpr std::size_t kDefaultBins = 50;
inline constexpr double kDefaultHpdMass = 0.95;

struct HpdInterval {
  double lower = 0.0;
  double upper = 0.0;
  double mass = kDefaultHpdMass;

  [[nodiscard]] double width() const { return upper - lower; }
};

/// ceil(mass * n), clamped to [1, n].
std::size_t hpd_window_size(std::size_t n, double mass);

/// Shortest interval spanning ceil(mass * N) consecutive order statistics;
/// the earliest such window wins ties. Needs N >= 2 and 0 < mass < 1.
HpdInterval hpd(std::span<const double> samples, double mass = kDefaultHpdMass);

struct HistogramBin {
  double center;
  std::size_t count;
};

/// Equal-width bins spanning [min, max]; the maximum falls in the last bin.
std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bins);

/// Center of the most populated histogram bin (earliest on ties).
double mode_estimate(std::span<const double> samples, std::size_t bins = kDefaultBins);

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

/// Per-parameter HPD table with one column per inference scheme.
struct HpdReport {
  struct Row {
    std::string parameter;
    std::vector<std::optional<HpdInterval>> intervals;  // aligned with `schemes`
  };

  double mass = kDefaultHpdMass;
  std::vector<std::string> schemes;
  std::vector<Row> rows;

  /// Interval for (parameter, scheme), if the report has one.
  [[nodiscard]] std::optional<HpdInterval> find(const std::string& parameter,
                                                const std::string& scheme) const;
};

/// Tab-separated table: a `# hpd_mass <mass>` line, a `parameter<TAB>schemes...`
/// header, then rows of `name<TAB>[lower, upper]` (`-` where a scheme has no entry).
void write_report(std::ostream& out, const HpdReport& report);
HpdReport read_report(std::istream& in);

}  // namespace tvgp
