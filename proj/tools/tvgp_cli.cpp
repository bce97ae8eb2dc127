#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tvgp/commands.hpp"
#include "tvgp/config.hpp"
#include "tvgp/errors.hpp"

namespace {

tvgp::RunConfig build_config(const std::string& config_path, const std::vector<std::string>& sets,
                             const std::string& output_dir) {
  tvgp::RunConfig cfg;
  if (!config_path.empty()) cfg = tvgp::load_config(config_path);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw tvgp::ParseError("--set expects key=value, got '" + s + "'", 0);
    }
    tvgp::apply_config_entry(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  return cfg;
}

void print(const tvgp::CommandOutput& out) {
  std::cout << out.summary;
  for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-variate GP inference of an unknown input"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string output_dir;
  app.add_option("-c,--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override a config key (key=value), repeatable");
  app.add_option("-o,--output-dir", output_dir, "output directory");

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic data set");

  std::string scheme_text = "train-only";
  auto* fit = app.add_subcommand("fit", "sample the GP parameters (and s_test for joint)");
  fit->add_option("--scheme", scheme_text, "train-only or joint")
      ->check(CLI::IsMember({"train-only", "joint"}));

  auto* predict = app.add_subcommand("predict", "posterior predictive of s_test at modal GP values");

  std::string trace_path;
  auto* analyze = app.add_subcommand("analyze", "HPD intervals and histograms from a trace CSV");
  analyze->add_option("trace", trace_path, "trace CSV")->required()->check(CLI::ExistingFile);

  std::string report_path;
  auto* convert = app.add_subcommand("convert-units", "report s1/s2 as pattern speed and bar angle");
  convert->add_option("report", report_path, "HPD report")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const tvgp::RunConfig cfg = build_config(config_path, sets, output_dir);
    if (*simulate) {
      print(tvgp::cmd_simulate(cfg));
    } else if (*fit) {
      print(tvgp::cmd_fit(cfg, tvgp::parse_scheme(scheme_text)));
    } else if (*predict) {
      print(tvgp::cmd_predict(cfg));
    } else if (*analyze) {
      print(tvgp::cmd_analyze(trace_path, cfg));
    } else if (*convert) {
      print(tvgp::cmd_convert_units(report_path, cfg));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tvgp: %s\n", e.what());
    return 1;
  }
  return 0;
}
