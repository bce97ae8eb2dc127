#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tvgp/config.hpp"
#include "tvgp/posterior.hpp"
#include "tvgp/sampler.hpp"

namespace tvgp {

/// Overrides `output_dir` from the config when set.
inline constexpr const char* kOutputDirEnv = "TVGP_OUTPUT_DIR";

struct CommandOutput {
  std::vector<std::filesystem::path> files;
  std::string summary;
};

std::filesystem::path effective_output_dir(const RunConfig& cfg);

/// Modal GP scalars file (`key = value`, keys q11 q22 sigma11 sigma22 rho).
GpScalars load_modal(const std::filesystem::path& path);
void save_modal(const std::filesystem::path& path, const GpScalars& gp);

/// Starting point for a scheme: config `init.*` values, then the modal file
/// (when configured) for GP components, then built-in defaults. Schemes that
/// sample s_test start from the best point of s_test_candidates (see
/// scan_start) unless init.s1 or init.s2 is configured.
ParamVector initial_point(const RunConfig& cfg, Scheme scheme);

/// Runs `chains` independent chains, concurrently, each seeded from
/// derive_seed(master_seed, stream, chain index).
std::vector<Trace> run_chains(const LogTarget& target, const ChainConfig& base,
                              std::size_t chains, std::uint64_t master_seed,
                              std::uint64_t stream);

/// Writes full.tensor, train.tensor, test.tensor, design.csv and truth.txt.
CommandOutput cmd_simulate(const RunConfig& cfg);

/// Scheme train-only or joint. Writes per-chain traces, an HPD report,
/// histogram CSVs and (train-only) the modal GP file modal.txt.
CommandOutput cmd_fit(const RunConfig& cfg, Scheme scheme);

/// Posterior predictive of s_test at the modal GP parameters in data.modal.
CommandOutput cmd_predict(const RunConfig& cfg);

/// HPD report and histograms for every parameter column of a trace CSV.
CommandOutput cmd_analyze(const std::filesystem::path& trace_csv, const RunConfig& cfg);

/// Converts the s1/s2 rows of an HPD report into pattern speed and bar angle.
CommandOutput cmd_convert_units(const std::filesystem::path& report, const RunConfig& cfg);

}  // namespace tvgp
