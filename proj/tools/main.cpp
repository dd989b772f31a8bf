#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qeomx/driver.hpp"
#include "qeomx/errors.hpp"

namespace {

// Shared config options: a config file plus key=value overrides.
struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "flat key=value config file");
  cmd->add_option("-s,--set", args.overrides, "override, e.g. --set h8.b=0.6")->take_all();
}

qeomx::RunConfig load_config(const CommonArgs& args) {
  qeomx::RunConfig config;
  if (!args.config_path.empty()) config = qeomx::parse_config_file(args.config_path);
  for (const auto& ov : args.overrides) qeomx::apply_override(config, ov);
  return config;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const qeomx::ContractViolation& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const qeomx::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qeomx: excited-state emulation with symmetry- and perturbation-screened qEOM/QSE"};
  app.require_subcommand(1);

  CommonArgs ground_args, excite_args, scan_args, screen_args;
  std::vector<double> scan_values;
  std::string write_fcidump_path;
  std::string info_path, info_group;

  auto* ground = app.add_subcommand("ground", "ADAPT ground-state run (no excited blocks)");
  add_common(ground, ground_args);
  ground->add_option("--write-fcidump", write_fcidump_path,
                     "also export the active-space integrals as FCIDUMP");

  auto* excite = app.add_subcommand("excite", "full excited-state pipeline for one system");
  add_common(excite, excite_args);

  auto* scan = app.add_subcommand("scan", "repeat the pipeline over a geometry list");
  add_common(scan, scan_args);
  scan->add_option("--values", scan_values, "parameter list (h2.r or h8.b)")
      ->required()
      ->delimiter(',');

  auto* screen = app.add_subcommand("screen", "importance screening report for one block");
  add_common(screen, screen_args);
  bool rediag = false;
  screen->add_flag("--re-diagonalize-curve", rediag, "emit the energy-vs-k curve");

  auto* info = app.add_subcommand("fcidump-info", "summarize an FCIDUMP file");
  info->add_option("path", info_path, "FCIDUMP file")->required();
  info->add_option("--point-group", info_group, "override the inferred point group");

  CLI11_PARSE(app, argc, argv);

  if (ground->parsed()) {
    return guarded([&] {
      qeomx::RunConfig config = load_config(ground_args);
      config.variants = {"sd"};
      config.ground_only = true;
      if (!write_fcidump_path.empty()) {
        std::ofstream out(write_fcidump_path);
        out << qeomx::export_fcidump(config);
      }
      std::cout << qeomx::run_single(config) << "\n";
      return 0;
    });
  }
  if (excite->parsed()) {
    return guarded([&] {
      qeomx::RunConfig config = load_config(excite_args);
      std::cout << qeomx::run_single(config) << "\n";
      return 0;
    });
  }
  if (scan->parsed()) {
    return guarded([&] {
      qeomx::RunConfig config = load_config(scan_args);
      std::cout << qeomx::run_scan(config, scan_values) << "\n";
      return 0;
    });
  }
  if (screen->parsed()) {
    return guarded([&] {
      qeomx::RunConfig config = load_config(screen_args);
      if (rediag) config.rediag_curve = true;
      std::cout << qeomx::screen_report(config) << "\n";
      return 0;
    });
  }
  if (info->parsed()) {
    return guarded([&] {
      std::optional<std::string> group;
      if (!info_group.empty()) group = info_group;
      std::cout << qeomx::fcidump_info(info_path, group) << "\n";
      return 0;
    });
  }
  return 0;
}
