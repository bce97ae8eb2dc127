#include "tvgp/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tvgp/errors.hpp"

namespace tvgp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_point(const ParamVector& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < kParamCount; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%.17g", i ? ", " : "", kParamNames[i].data(),
                  p.values[i]);
    out += buf;
  }
  return out + "}";
}

double evaluate(const LogTarget& target, const ParamVector& p) {
  double value = 0.0;
  try {
    value = target(p);
  } catch (const std::exception& e) {
    throw ChainError(std::string("target evaluation failed at ") + format_point(p) + ": " +
                         e.what(),
                     p);
  }
  if (std::isnan(value) || value == std::numeric_limits<double>::infinity()) {
    throw ChainError("target returned " + std::to_string(value) + " at " + format_point(p), p);
  }
  return value;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

void ChainConfig::validate() const {
  if (iterations == 0) throw PreconditionError("chain needs at least one iteration");
  if (burn_in >= iterations) {
    throw PreconditionError("burn_in (" + std::to_string(burn_in) +
                            ") must be smaller than iterations (" + std::to_string(iterations) +
                            ")");
  }
  if (thin == 0) throw PreconditionError("thin must be positive");
  if (proposal_sd.size() != init.active_count()) {
    throw PreconditionError("expected " + std::to_string(init.active_count()) +
                            " proposal scales, got " + std::to_string(proposal_sd.size()));
  }
  for (double sd : proposal_sd) {
    if (!(sd >= 0.0) || !std::isfinite(sd)) {
      throw PreconditionError("proposal scales must be finite and nonnegative");
    }
  }
}

std::vector<double> default_proposal_sd(const ParamVector& init) {
  std::vector<double> sd;
  for (std::size_t i : init.active_indices()) {
    switch (static_cast<Param>(i)) {
      case Param::S1:
      case Param::S2: sd.push_back(0.05); break;
      case Param::Q11:
      case Param::Q22: sd.push_back(0.02 * std::max(std::abs(init.values[i]), 1e-3)); break;
      default: sd.push_back(0.02); break;
    }
  }
  return sd;
}

double Trace::acceptance_rate() const {
  return proposal_count ? static_cast<double>(accept_count) / static_cast<double>(proposal_count)
                        : 0.0;
}

std::vector<double> Trace::column(std::size_t param) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.values.at(param));
  return out;
}

ParamVector scan_start(const LogTarget& target, const ParamVector& init,
                       const Eigen::MatrixXd& candidates) {
  if (candidates.cols() != 2) throw ShapeError("scan candidates must have two columns");
  ParamVector best = init;
  double best_value = target(init);
  for (Eigen::Index r = 0; r < candidates.rows(); ++r) {
    ParamVector p = init;
    p[Param::S1] = candidates(r, 0);
    p[Param::S2] = candidates(r, 1);
    const double v = target(p);
    if (v > best_value) {
      best_value = v;
      best = p;
    }
  }
  return best;
}

ParamVector propose(const ParamVector& current, std::span<const double> proposal_sd, Rng& rng) {
  ParamVector next = current;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (!current.active[i]) continue;
    if (k >= proposal_sd.size()) throw PreconditionError("too few proposal scales");
    next.values[i] = current.values[i] + proposal_sd[k++] * normal(rng);
  }
  return next;
}

double accept_ratio(double log_target_new, double log_target_cur) {
  if (log_target_new == -std::numeric_limits<double>::infinity()) return 0.0;
  const double diff = log_target_new - log_target_cur;
  return diff >= 0.0 ? 1.0 : std::exp(diff);
}

Trace run_chain(const LogTarget& target, const ChainConfig& cfg) {
  cfg.validate();
  Trace trace;
  trace.config = cfg;

  ParamVector state = cfg.init;
  double current = evaluate(target, state);
  if (!std::isfinite(current)) {
    throw ChainError("log-target is not finite at the initial point " + format_point(state) +
                         "; choose a starting point inside the prior support",
                     state);
  }

  const std::size_t stored = (cfg.iterations - cfg.burn_in) / cfg.thin;
  trace.iteration.reserve(stored);
  trace.samples.reserve(stored);
  trace.log_target.reserve(stored);

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const ParamVector candidate = propose(state, cfg.proposal_sd, rng);
    const double u = uniform(rng);
    ++trace.proposal_count;
    const double proposed = evaluate(target, candidate);
    // u lies in [0, 1), so u < alpha accepts with probability alpha and never
    // accepts an alpha = 0 (out-of-support) proposal.
    if (u < accept_ratio(proposed, current)) {
      state = candidate;
      current = proposed;
      ++trace.accept_count;
    }
    if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) {
      trace.iteration.push_back(t);
      trace.samples.push_back(state);
      trace.log_target.push_back(current);
    }
  }
  return trace;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const auto active = trace.config.init.active_indices();
  out << "iter";
  for (std::size_t i : active) out << ',' << kParamNames[i];
  out << ",log_target\n";
  char buf[40];
  for (std::size_t r = 0; r < trace.samples.size(); ++r) {
    out << trace.iteration[r];
    for (std::size_t i : active) {
      std::snprintf(buf, sizeof buf, ",%.17g", trace.samples[r].values[i]);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", trace.log_target[r]);
    out << buf;
  }
}

TraceTable read_trace_csv(std::istream& in) {
  TraceTable table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace CSV is empty", 1);

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.front() != "iter" || header.back() != "log_target") {
    throw ParseError("trace CSV header must read iter,<params...>,log_target", 1);
  }
  table.names.assign(header.begin() + 1, header.end() - 1);
  table.columns.resize(table.names.size());

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw ParseError("trace CSV line " + std::to_string(line_no) + " has " +
                           std::to_string(cells.size()) + " fields, expected " +
                           std::to_string(header.size()),
                       line_no);
    }
    try {
      table.iteration.push_back(std::stoull(cells.front()));
      for (std::size_t c = 0; c < table.names.size(); ++c) {
        table.columns[c].push_back(std::stod(cells[c + 1]));
      }
      table.log_target.push_back(std::stod(cells.back()));
    } catch (const std::logic_error&) {
      throw ParseError("trace CSV line " + std::to_string(line_no) + " has a non-numeric field",
                       line_no);
    }
  }
  return table;
}

}  // namespace tvgp
