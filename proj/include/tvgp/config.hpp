#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tvgp/analysis.hpp"
#include "tvgp/covariance.hpp"
#include "tvgp/posterior.hpp"
#include "tvgp/units.hpp"

namespace tvgp {

/// Everything a CLI run needs. Read from a flat `key = value` file; every key
/// is optional and unknown keys are rejected.
///
/// Recognised keys:
///   seed, iterations, burn_in, thin, chains, pilot_iterations,
///   output_dir, bins, hpd_mass, jitter,
///   data.tensor, data.design, data.test_slice, data.modal,
///   init.<param>, proposal_sd.<param>           (param in s1 s2 q11 q22 sigma11 sigma22 rho)
///   prior.{q11,q22,s1,s2}_{lower,upper}, prior.sigma3 (flat-log | jeffreys-style),
///   units.r_sun_kpc, units.v0_kms,
///   sim.n_r, sim.n_phi, sim.r_lower, sim.r_upper, sim.phi_lower, sim.phi_upper,
///   sim.m2, sim.m3, sim.sigma2_coefficient, sim.s1_test, sim.s2_test,
///   true.{q11,q22,sigma11,sigma22,rho}
struct RunConfig {
  std::filesystem::path tensor_path;
  std::filesystem::path design_path;
  std::filesystem::path test_slice_path;
  std::filesystem::path modal_path;
  std::filesystem::path output_dir = "out";

  std::uint64_t seed = 1;
  std::size_t iterations = 20000;
  std::size_t burn_in = 5000;
  std::size_t thin = 1;
  std::size_t chains = 1;
  std::size_t pilot_iterations = 0;
  std::array<std::optional<double>, kParamCount> init{};
  std::array<std::optional<double>, kParamCount> proposal_sd{};

  PriorSpec prior;
  std::size_t bins = kDefaultBins;
  double hpd_mass = kDefaultHpdMass;
  double jitter = kDefaultRelativeJitter;
  UnitConstants units;

  std::size_t grid_n_r = 12;
  std::size_t grid_n_phi = 18;
  Bounds grid_r{1.7, 2.3};
  Bounds grid_phi{0.0, 1.5707963267948966};
  std::size_t m2 = 50;
  std::size_t m3 = 2;
  double sigma2_coefficient = 0.5;
  std::optional<double> s1_test;
  std::optional<double> s2_test;
  GpScalars truth{200.0, 50.0, 0.7, 0.3, -0.05};
};

/// Applies the entries of a config stream on top of `base`. Relative data and
/// output paths are resolved against `base_dir`. Throws ParseError with the
/// line number on unknown keys or malformed values.
RunConfig parse_config(std::istream& in, RunConfig base = {},
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Applies one `key=value` override (as given with --set on the command line).
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                        std::size_t line = 0, const std::filesystem::path& base_dir = {});

}  // namespace tvgp
