#include "tvgp/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "tvgp/errors.hpp"
#include "tvgp/io.hpp"

namespace tvgp {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, std::size_t line,
                            const std::string& expected) {
  throw ParseError("config line " + std::to_string(line) + ": value '" + value + "' for '" + key +
                       "' is not " + expected,
                   line);
}

double to_real(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::logic_error&) {
    bad_value(key, value, line, "a number");
  }
  if (used != value.size()) bad_value(key, value, line, "a number");
  return v;
}

std::uint64_t to_count(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t used = 0;
  unsigned long long v = 0;
  if (value.empty() || value.front() == '-') bad_value(key, value, line, "a nonnegative integer");
  try {
    v = std::stoull(value, &used);
  } catch (const std::logic_error&) {
    bad_value(key, value, line, "a nonnegative integer");
  }
  if (used != value.size()) bad_value(key, value, line, "a nonnegative integer");
  return v;
}

std::filesystem::path to_path(const std::string& value, const std::filesystem::path& base_dir) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value,
                                  std::size_t line, const std::filesystem::path& base_dir)>;

template <typename Member>
Setter count_setter(Member member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v, std::size_t line,
                  const std::filesystem::path&) {
    c.*member = static_cast<std::remove_reference_t<decltype(c.*member)>>(to_count(k, v, line));
  };
}

Setter real_setter(double RunConfig::*member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v, std::size_t line,
                  const std::filesystem::path&) { c.*member = to_real(k, v, line); };
}

Setter path_setter(std::filesystem::path RunConfig::*member) {
  return [member](RunConfig& c, const std::string&, const std::string& v, std::size_t,
                  const std::filesystem::path& base) { c.*member = to_path(v, base); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["seed"] = count_setter(&RunConfig::seed);
    t["iterations"] = count_setter(&RunConfig::iterations);
    t["burn_in"] = count_setter(&RunConfig::burn_in);
    t["thin"] = count_setter(&RunConfig::thin);
    t["chains"] = count_setter(&RunConfig::chains);
    t["pilot_iterations"] = count_setter(&RunConfig::pilot_iterations);
    t["bins"] = count_setter(&RunConfig::bins);
    t["hpd_mass"] = real_setter(&RunConfig::hpd_mass);
    t["jitter"] = real_setter(&RunConfig::jitter);
    t["output_dir"] = path_setter(&RunConfig::output_dir);
    t["data.tensor"] = path_setter(&RunConfig::tensor_path);
    t["data.design"] = path_setter(&RunConfig::design_path);
    t["data.test_slice"] = path_setter(&RunConfig::test_slice_path);
    t["data.modal"] = path_setter(&RunConfig::modal_path);

    for (std::size_t i = 0; i < kParamCount; ++i) {
      const std::string name(kParamNames[i]);
      t["init." + name] = [i](RunConfig& c, const std::string& k, const std::string& v,
                              std::size_t line, const std::filesystem::path&) {
        c.init[i] = to_real(k, v, line);
      };
      t["proposal_sd." + name] = [i](RunConfig& c, const std::string& k, const std::string& v,
                                     std::size_t line, const std::filesystem::path&) {
        c.proposal_sd[i] = to_real(k, v, line);
      };
    }

    const auto bound = [](auto select) {
      return [select](RunConfig& c, const std::string& k, const std::string& v, std::size_t line,
                      const std::filesystem::path&) { select(c) = to_real(k, v, line); };
    };
    t["prior.q11_lower"] = bound([](RunConfig& c) -> double& { return c.prior.q_bounds[0].lower; });
    t["prior.q11_upper"] = bound([](RunConfig& c) -> double& { return c.prior.q_bounds[0].upper; });
    t["prior.q22_lower"] = bound([](RunConfig& c) -> double& { return c.prior.q_bounds[1].lower; });
    t["prior.q22_upper"] = bound([](RunConfig& c) -> double& { return c.prior.q_bounds[1].upper; });
    t["prior.s1_lower"] = bound([](RunConfig& c) -> double& { return c.prior.s_bounds[0].lower; });
    t["prior.s1_upper"] = bound([](RunConfig& c) -> double& { return c.prior.s_bounds[0].upper; });
    t["prior.s2_lower"] = bound([](RunConfig& c) -> double& { return c.prior.s_bounds[1].lower; });
    t["prior.s2_upper"] = bound([](RunConfig& c) -> double& { return c.prior.s_bounds[1].upper; });
    t["prior.sigma3"] = [](RunConfig& c, const std::string& k, const std::string& v,
                           std::size_t line, const std::filesystem::path&) {
      if (v != "flat-log" && v != "jeffreys-style") {
        bad_value(k, v, line, "flat-log or jeffreys-style");
      }
      c.prior.sigma3_prior = parse_sigma3_prior(v);
    };
    t["units.r_sun_kpc"] = bound([](RunConfig& c) -> double& { return c.units.r_sun_kpc; });
    t["units.v0_kms"] = bound([](RunConfig& c) -> double& { return c.units.v0_kms; });

    t["sim.n_r"] = count_setter(&RunConfig::grid_n_r);
    t["sim.n_phi"] = count_setter(&RunConfig::grid_n_phi);
    t["sim.m2"] = count_setter(&RunConfig::m2);
    t["sim.m3"] = count_setter(&RunConfig::m3);
    t["sim.r_lower"] = bound([](RunConfig& c) -> double& { return c.grid_r.lower; });
    t["sim.r_upper"] = bound([](RunConfig& c) -> double& { return c.grid_r.upper; });
    t["sim.phi_lower"] = bound([](RunConfig& c) -> double& { return c.grid_phi.lower; });
    t["sim.phi_upper"] = bound([](RunConfig& c) -> double& { return c.grid_phi.upper; });
    t["sim.sigma2_coefficient"] = real_setter(&RunConfig::sigma2_coefficient);
    t["sim.s1_test"] = [](RunConfig& c, const std::string& k, const std::string& v,
                          std::size_t line, const std::filesystem::path&) {
      c.s1_test = to_real(k, v, line);
    };
    t["sim.s2_test"] = [](RunConfig& c, const std::string& k, const std::string& v,
                          std::size_t line, const std::filesystem::path&) {
      c.s2_test = to_real(k, v, line);
    };
    t["true.q11"] = bound([](RunConfig& c) -> double& { return c.truth.q11; });
    t["true.q22"] = bound([](RunConfig& c) -> double& { return c.truth.q22; });
    t["true.sigma11"] = bound([](RunConfig& c) -> double& { return c.truth.sigma11; });
    t["true.sigma22"] = bound([](RunConfig& c) -> double& { return c.truth.sigma22; });
    t["true.rho"] = bound([](RunConfig& c) -> double& { return c.truth.rho; });
    return t;
  }();
  return table;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                        std::size_t line, const std::filesystem::path& base_dir) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ParseError("config line " + std::to_string(line) + ": unknown key '" + key + "'", line);
  }
  it->second(cfg, key, value, line, base_dir);
}

RunConfig parse_config(std::istream& in, RunConfig base, const std::filesystem::path& base_dir) {
  for (const auto& e : read_key_values(in)) {
    apply_config_entry(base, e.key, e.value, e.line, base_dir);
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  auto in = open_input(path);
  try {
    return parse_config(in, std::move(base), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

}  // namespace tvgp
