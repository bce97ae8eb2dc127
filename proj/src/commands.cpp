#include "tvgp/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <sstream>

#include "tvgp/analysis.hpp"
#include "tvgp/errors.hpp"
#include "tvgp/io.hpp"
#include "tvgp/synthetic.hpp"
#include "tvgp/units.hpp"

namespace tvgp {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kStreamChains = 100;
constexpr std::uint64_t kStreamPilot = 200;

constexpr std::array<std::string_view, 5> kGpKeys = {"q11", "q22", "sigma11", "sigma22", "rho"};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

void require_path(const fs::path& p, const char* key) {
  if (p.empty()) throw PreconditionError(std::string("config key '") + key + "' is required");
}

std::uint64_t scheme_stream(std::uint64_t base, Scheme scheme) {
  return base + static_cast<std::uint64_t>(scheme);
}

ChainConfig chain_config(const RunConfig& cfg, const ParamVector& init) {
  ChainConfig cc;
  cc.seed = cfg.seed;
  cc.iterations = cfg.iterations;
  cc.burn_in = cfg.burn_in;
  cc.thin = cfg.thin;
  cc.init = init;
  const auto defaults = default_proposal_sd(init);
  const auto active = init.active_indices();
  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto& override_sd = cfg.proposal_sd[active[k]];
    cc.proposal_sd.push_back(override_sd ? *override_sd : defaults[k]);
  }
  return cc;
}

std::vector<double> pooled(const std::vector<Trace>& traces, std::size_t param) {
  std::vector<double> out;
  for (const auto& t : traces) {
    const auto col = t.column(param);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

// Traces, histograms and the HPD report shared by fit and predict.
HpdReport emit_chain_outputs(const RunConfig& cfg, Scheme scheme, const std::vector<Trace>& traces,
                             const fs::path& dir, CommandOutput& result,
                             std::ostringstream& report_comments) {
  const std::string name(scheme_name(scheme));
  for (std::size_t c = 0; c < traces.size(); ++c) {
    const fs::path p = dir / ("trace_" + name + "_chain" + std::to_string(c) + ".csv");
    auto out = open_output(p);
    write_trace_csv(out, traces[c]);
    result.files.push_back(p);
    report_comments << "# acceptance_rate chain" << c << ' '
                    << fmt("%.4f", traces[c].acceptance_rate()) << '\n';
  }

  HpdReport report;
  report.mass = cfg.hpd_mass;
  report.schemes = {name};
  for (std::size_t i : traces.front().config.init.active_indices()) {
    const auto samples = pooled(traces, i);
    const std::string pname(kParamNames[i]);
    if (samples.size() >= 2) {
      report.rows.push_back({pname, {hpd(samples, cfg.hpd_mass)}});
    } else {
      report.rows.push_back({pname, {std::nullopt}});
    }
    const fs::path hp = dir / ("hist_" + name + "_" + pname + ".csv");
    auto out = open_output(hp);
    write_histogram_csv(out, histogram(samples, cfg.bins));
    result.files.push_back(hp);
  }
  return report;
}

void write_report_file(const fs::path& path, const HpdReport& report, const std::string& comments,
                       CommandOutput& result) {
  auto out = open_output(path);
  out << comments;
  write_report(out, report);
  result.files.push_back(path);
  std::ostringstream text;
  write_report(text, report);
  result.summary += text.str();
}

std::string pilot_summary(const LogTarget& target, const RunConfig& cfg, const ChainConfig& cc,
                          Scheme scheme) {
  if (cfg.pilot_iterations == 0) return {};
  ChainConfig pilot = cc;
  pilot.iterations = cfg.pilot_iterations;
  pilot.burn_in = 0;
  pilot.thin = cfg.pilot_iterations;
  pilot.seed = derive_seed(cfg.seed, scheme_stream(kStreamPilot, scheme), 0);
  const Trace t = run_chain(target, pilot);
  return "pilot acceptance rate " + fmt("%.4f", t.acceptance_rate()) +
         " (retune proposal_sd.* toward 0.2-0.4)\n";
}

DenseTensor load_augmented(const RunConfig& cfg, const DesignPoints& design) {
  require_path(cfg.tensor_path, "data.tensor");
  require_path(cfg.test_slice_path, "data.test_slice");
  const DenseTensor train = load_tensor(cfg.tensor_path);
  check_design_matches(train, design);
  const DenseTensor test = load_tensor(cfg.test_slice_path);
  if (test.rank() != 3 || test.dim(0) != 1) {
    throw ShapeError("test slice must be a 1 x m2 x m3 tensor");
  }
  return concatenate(train, test, 0);
}

}  // namespace

fs::path effective_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return cfg.output_dir;
}

GpScalars load_modal(const fs::path& path) {
  if (path.empty()) throw PreconditionError("a modal GP parameter file (data.modal) is required");
  if (!fs::exists(path)) {
    throw PreconditionError("modal GP parameter file '" + path.string() +
                            "' does not exist; run `fit --scheme train-only` first");
  }
  auto in = open_input(path);
  std::array<std::optional<double>, 5> values{};
  for (const auto& e : read_key_values(in)) {
    const auto it = std::find(kGpKeys.begin(), kGpKeys.end(), e.key);
    if (it == kGpKeys.end()) {
      throw ParseError(path.string() + " line " + std::to_string(e.line) + ": unknown key '" +
                           e.key + "'",
                       e.line);
    }
    try {
      values[static_cast<std::size_t>(it - kGpKeys.begin())] = std::stod(e.value);
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + " line " + std::to_string(e.line) + ": bad number",
                       e.line);
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      throw ParseError(path.string() + ": missing key '" + std::string(kGpKeys[i]) + "'", 0);
    }
  }
  return {*values[0], *values[1], *values[2], *values[3], *values[4]};
}

void save_modal(const fs::path& path, const GpScalars& gp) {
  auto out = open_output(path);
  write_key_values(out,
                   {{"q11", format_double(gp.q11)},
                    {"q22", format_double(gp.q22)},
                    {"sigma11", format_double(gp.sigma11)},
                    {"sigma22", format_double(gp.sigma22)},
                    {"rho", format_double(gp.rho)}},
                   "modal GP parameters from a train-only fit");
}

ParamVector initial_point(const RunConfig& cfg, Scheme scheme) {
  std::array<double, kParamCount> values{};
  values[0] = 0.5 * (cfg.prior.s_bounds[0].lower + cfg.prior.s_bounds[0].upper);
  values[1] = 0.5 * (cfg.prior.s_bounds[1].lower + cfg.prior.s_bounds[1].upper);
  GpScalars gp{10.0, 10.0, 1.0, 1.0, 0.0};
  if (!cfg.modal_path.empty() && fs::exists(cfg.modal_path)) gp = load_modal(cfg.modal_path);
  values[2] = gp.q11;
  values[3] = gp.q22;
  values[4] = gp.sigma11;
  values[5] = gp.sigma22;
  values[6] = gp.rho;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (cfg.init[i]) values[i] = *cfg.init[i];
  }
  return ParamVector::for_scheme(scheme, values);
}

std::vector<Trace> run_chains(const LogTarget& target, const ChainConfig& base,
                              std::size_t chains, std::uint64_t master_seed,
                              std::uint64_t stream) {
  if (chains == 0) throw PreconditionError("chains must be >= 1");
  std::vector<std::future<Trace>> futures;
  futures.reserve(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    ChainConfig cc = base;
    cc.seed = derive_seed(master_seed, stream, c);
    futures.push_back(std::async(std::launch::async, [&target, cc] { return run_chain(target, cc); }));
  }
  std::vector<Trace> traces;
  traces.reserve(chains);
  for (auto& f : futures) traces.push_back(f.get());
  return traces;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
  const fs::path dir = effective_output_dir(cfg);
  const DesignPoints grid = make_polar_grid(cfg.grid_n_r, cfg.grid_n_phi, cfg.grid_r, cfg.grid_phi);

  SyntheticOptions opts;
  opts.m2 = cfg.m2;
  opts.m3 = cfg.m3;
  opts.seed = cfg.seed;
  opts.sigma2_coefficient = cfg.sigma2_coefficient;
  opts.relative_jitter = cfg.jitter;
  if (cfg.s1_test.has_value() != cfg.s2_test.has_value()) {
    throw PreconditionError("set both sim.s1_test and sim.s2_test, or neither");
  }
  if (cfg.s1_test) opts.s_test = Eigen::Vector2d(*cfg.s1_test, *cfg.s2_test);

  const SyntheticDataset ds = generate_dataset(grid, cfg.truth, opts);

  CommandOutput result;
  const auto emit_tensor = [&](const char* file, const DenseTensor& t) {
    save_tensor(dir / file, t);
    result.files.push_back(dir / file);
  };
  emit_tensor("full.tensor", ds.full);
  emit_tensor("train.tensor", ds.training);
  emit_tensor("test.tensor", ds.test_slice);
  save_design(dir / "design.csv", ds.design);
  result.files.push_back(dir / "design.csv");

  {
    auto out = open_output(dir / "truth.txt");
    write_key_values(out,
                     {{"s1", format_double(ds.s_test[0])},
                      {"s2", format_double(ds.s_test[1])},
                      {"q11", format_double(ds.truth.q11)},
                      {"q22", format_double(ds.truth.q22)},
                      {"sigma11", format_double(ds.truth.sigma11)},
                      {"sigma22", format_double(ds.truth.sigma22)},
                      {"rho", format_double(ds.truth.rho)}},
                     "true parameters of the synthetic data set");
    result.files.push_back(dir / "truth.txt");
  }

  std::ostringstream summary;
  summary << "simulated " << ds.full.dim(0) << " x " << ds.full.dim(1) << " x " << ds.full.dim(2)
          << " tensor (" << ds.design.rows() << " design points + 1 test slice) into "
          << dir.string() << '\n';
  result.summary = summary.str();
  return result;
}

CommandOutput cmd_fit(const RunConfig& cfg, Scheme scheme) {
  if (scheme == Scheme::Predictive) {
    throw PreconditionError("fit supports train-only and joint; use predict for the predictive scheme");
  }
  require_path(cfg.design_path, "data.design");
  const DesignPoints design = load_design(cfg.design_path);

  LogTarget target;
  if (scheme == Scheme::TrainOnly) {
    require_path(cfg.tensor_path, "data.tensor");
    const DenseTensor d = load_tensor(cfg.tensor_path);
    check_design_matches(d, design);
    target = [post = std::make_shared<const TrainingPosterior>(d, design, cfg.prior, cfg.jitter)](
                 const ParamVector& p) { return (*post)(p); };
  } else {
    const DenseTensor d_star = load_augmented(cfg, design);
    target = [post = std::make_shared<const JointPosterior>(d_star, design, cfg.prior, cfg.jitter)](
                 const ParamVector& p) { return (*post)(p); };
  }

  ParamVector init = initial_point(cfg, scheme);
  if (scheme == Scheme::Joint && !cfg.init[0] && !cfg.init[1]) {
    init = scan_start(target, init, s_test_candidates(cfg.prior));
  }
  const ChainConfig cc = chain_config(cfg, init);
  CommandOutput result;
  result.summary = pilot_summary(target, cfg, cc, scheme);
  const auto traces =
      run_chains(target, cc, cfg.chains, cfg.seed, scheme_stream(kStreamChains, scheme));

  const fs::path dir = effective_output_dir(cfg);
  std::ostringstream comments;
  const HpdReport report = emit_chain_outputs(cfg, scheme, traces, dir, result, comments);
  write_report_file(dir / ("report_" + std::string(scheme_name(scheme)) + ".txt"), report,
                    comments.str(), result);

  if (scheme == Scheme::TrainOnly) {
    const GpScalars modal{mode_estimate(pooled(traces, 2), cfg.bins),
                          mode_estimate(pooled(traces, 3), cfg.bins),
                          mode_estimate(pooled(traces, 4), cfg.bins),
                          mode_estimate(pooled(traces, 5), cfg.bins),
                          mode_estimate(pooled(traces, 6), cfg.bins)};
    save_modal(dir / "modal.txt", modal);
    result.files.push_back(dir / "modal.txt");
  }
  return result;
}

CommandOutput cmd_predict(const RunConfig& cfg) {
  const GpScalars fixed = load_modal(cfg.modal_path);
  require_path(cfg.design_path, "data.design");
  const DesignPoints design = load_design(cfg.design_path);
  const DenseTensor d_star = load_augmented(cfg, design);
  const auto post =
      std::make_shared<const PredictivePosterior>(d_star, design, fixed, cfg.prior, cfg.jitter);
  const LogTarget target = [post](const ParamVector& p) { return (*post)(p); };

  ParamVector init = initial_point(cfg, Scheme::Predictive);
  if (!cfg.init[0] && !cfg.init[1]) init = scan_start(target, init, s_test_candidates(cfg.prior));
  const ChainConfig cc = chain_config(cfg, init);
  CommandOutput result;
  result.summary = pilot_summary(target, cfg, cc, Scheme::Predictive);
  const auto traces = run_chains(target, cc, cfg.chains, cfg.seed,
                                 scheme_stream(kStreamChains, Scheme::Predictive));

  const fs::path dir = effective_output_dir(cfg);
  std::ostringstream comments;
  HpdReport report = emit_chain_outputs(cfg, Scheme::Predictive, traces, dir, result, comments);
  const auto s1 = report.find("s1", "predictive");
  const auto s2 = report.find("s2", "predictive");
  if (s1) report.rows.push_back({"omega_bar_kms_kpc", {omega_bar_interval(*s1, cfg.units)}});
  if (s2) report.rows.push_back({"bar_angle_deg", {bar_angle_interval(*s2)}});
  write_report_file(dir / "report_predictive.txt", report, comments.str(), result);
  return result;
}

CommandOutput cmd_analyze(const fs::path& trace_csv, const RunConfig& cfg) {
  auto in = open_input(trace_csv);
  const TraceTable table = read_trace_csv(in);
  const fs::path dir = effective_output_dir(cfg);
  const std::string stem = trace_csv.stem().string();

  CommandOutput result;
  HpdReport report;
  report.mass = cfg.hpd_mass;
  report.schemes = {stem};
  std::ostringstream modes;
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    const auto& samples = table.columns[c];
    report.rows.push_back({table.names[c], {hpd(samples, cfg.hpd_mass)}});
    const fs::path hp = dir / (stem + "_hist_" + table.names[c] + ".csv");
    auto out = open_output(hp);
    write_histogram_csv(out, histogram(samples, cfg.bins));
    result.files.push_back(hp);
    modes << "# mode " << table.names[c] << ' '
          << format_double(mode_estimate(samples, cfg.bins)) << '\n';
  }
  write_report_file(dir / (stem + "_report.txt"), report, modes.str(), result);
  return result;
}

CommandOutput cmd_convert_units(const fs::path& report_path, const RunConfig& cfg) {
  auto in = open_input(report_path);
  const HpdReport in_report = read_report(in);

  HpdReport out_report;
  out_report.mass = in_report.mass;
  out_report.schemes = in_report.schemes;
  HpdReport::Row omega{"omega_bar_kms_kpc", {}};
  HpdReport::Row angle{"bar_angle_deg", {}};
  bool any = false;
  for (const auto& scheme : in_report.schemes) {
    const auto s1 = in_report.find("s1", scheme);
    const auto s2 = in_report.find("s2", scheme);
    omega.intervals.push_back(s1 ? std::optional(omega_bar_interval(*s1, cfg.units)) : std::nullopt);
    angle.intervals.push_back(s2 ? std::optional(bar_angle_interval(*s2)) : std::nullopt);
    any = any || s1 || s2;
  }
  if (!any) throw PreconditionError("report '" + report_path.string() + "' has no s1 or s2 rows");
  out_report.rows = {omega, angle};

  CommandOutput result;
  write_report_file(effective_output_dir(cfg) / (report_path.stem().string() + "_units.txt"),
                    out_report, {}, result);
  return result;
}

}  // namespace tvgp
