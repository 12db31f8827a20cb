// Batch front-end: mtnv_cli --config run.yaml [--study dark] [--out dir]
//                          [--parallel n] [--override key=value]...

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtnv/config.hpp"
#include "mtnv/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Majorana / torsion / NV hybrid device simulator"};
  std::string config_path;
  std::string study;
  std::string out_dir;
  std::size_t parallel = 1;
  std::vector<std::string> overrides;
  bool print_defaults = false;

  app.add_option("--config", config_path, "YAML run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--study", study, "lattice | rabi | direct | dark");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--parallel", parallel, "concurrent sweep points")
      ->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "dotted-path override key=value");
  app.add_flag("--print-defaults", print_defaults,
               "print the default configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mtnv::runner::kConfigError;
  }

  if (print_defaults) {
    std::cout << mtnv::config::default_config_yaml();
    return 0;
  }

  if (!out_dir.empty()) overrides.push_back("output_dir=" + out_dir);
  std::optional<std::string> study_opt;
  if (!study.empty()) study_opt = study;

  mtnv::config::RunConfig cfg;
  try {
    cfg = config_path.empty()
              ? mtnv::config::parse_config("", overrides, study_opt)
              : mtnv::config::load_config(config_path, overrides, study_opt);
  } catch (const mtnv::config::ConfigError& e) {
    const nlohmann::json rec = {{"status", "error"},
                                {"exit_code", mtnv::runner::kConfigError},
                                {"kind", "config"},
                                {"message", e.what()}};
    std::cerr << rec.dump() << "\n";
    return mtnv::runner::kConfigError;
  }

  std::vector<mtnv::runner::RunOutcome> outcomes;
  const int rc = mtnv::runner::run(cfg, parallel, &outcomes);
  for (const auto& o : outcomes) {
    std::cout << o.run_name << ": "
              << (o.exit_code == 0 ? "ok" : "failed (" + std::to_string(o.exit_code) + ")")
              << "\n";
    for (const auto& f : o.files) std::cout << "  " << f.string() << "\n";
  }
  return rc;
}
