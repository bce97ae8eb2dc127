#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvgp/posterior.hpp"

namespace tvgp {

using LogTarget = std::function<double(const ParamVector&)>;
using Rng = std::mt19937_64;

/// Stateless seed derivation (splitmix64 over master, stream and index), so
/// that adding streams or chains never shifts existing ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

struct ChainConfig {
  std::uint64_t seed = 0;
  std::size_t iterations = 1000;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::vector<double> proposal_sd;  // one per active parameter, in parameter order
  ParamVector init;

  void validate() const;
};

/// Default random-walk scales: 0.05 for s, 2% of the starting magnitude for
/// q, 0.02 for sigma11, sigma22 and rho.
std::vector<double> default_proposal_sd(const ParamVector& init);

struct Trace {
  std::vector<std::size_t> iteration;  // 1-based chain iteration of each stored state
  std::vector<ParamVector> samples;
  std::vector<double> log_target;
  std::size_t accept_count = 0;
  std::size_t proposal_count = 0;
  ChainConfig config;

  [[nodiscard]] double acceptance_rate() const;
  /// Stored values of one parameter, in chain order.
  [[nodiscard]] std::vector<double> column(std::size_t param) const;
};

/// Raised when the target cannot be evaluated; carries the offending point.
class ChainError : public std::runtime_error {
 public:
  ChainError(const std::string& what, ParamVector point)
      : std::runtime_error(what), point_(point) {}
  [[nodiscard]] const ParamVector& point() const noexcept { return point_; }

 private:
  ParamVector point_;
};

/// Copy of `init` with (s1, s2) moved to the candidate row that scores
/// highest under `target`. The posterior over s_test is sharply peaked and
/// has many narrow local modes, so a chain started at the midpoint of the
/// prior box may never find the right one.
ParamVector scan_start(const LogTarget& target, const ParamVector& init,
                       const Eigen::MatrixXd& candidates);

/// Perturbs each active component by an independent N(0, sd_i^2) draw.
ParamVector propose(const ParamVector& current, std::span<const double> proposal_sd, Rng& rng);

/// min(1, exp(new - cur)); 0 when the proposal has -infinite log-target.
double accept_ratio(double log_target_new, double log_target_cur);

/// Random-walk Metropolis-Hastings with joint Gaussian proposals. Stores the
/// states after burn-in, every `thin`-th iteration. Same config and target
/// give a bit-identical trace.
Trace run_chain(const LogTarget& target, const ChainConfig& cfg);

/// CSV with header `iter,<active param names>,log_target`.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Column-oriented view of a trace CSV, as read back from disk.
struct TraceTable {
  std::vector<std::string> names;  // parameter columns only
  std::vector<std::size_t> iteration;
  std::vector<std::vector<double>> columns;
  std::vector<double> log_target;
};

TraceTable read_trace_csv(std::istream& in);

}  // namespace tvgp
