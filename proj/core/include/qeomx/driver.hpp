#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qeomx/adapt.hpp"
#include "qeomx/qeom.hpp"
#include "qeomx/qse.hpp"

namespace qeomx {

/// Driver configuration: one system source, one method, a set of variants
/// and target irreps. Parsed from a flat key=value file with command-line
/// overrides applied on top.
struct RunConfig {
  enum class System { Fcidump, BuiltinH8, BuiltinH2 } system = System::BuiltinH2;
  std::string fcidump_path;
  double h8_b = 1.0;
  std::string h8_layout;  // empty: packaged distorted-octagon layout
  double h2_r = 1.4;

  std::string point_group;  // empty: d2h for builtins, inferred for FCIDUMP
  std::vector<int> frozen;
  std::optional<std::vector<int>> active;

  enum class Method { Qeom, Qse } method = Method::Qeom;
  std::vector<std::string> variants = {"sd"};  // sd sdt sdt-screened sd-paren-t
  std::vector<std::string> target_irreps;      // state irreps; empty: totally symmetric
  int target_ordinal = 1;                      // SD-level root, 1-based within the block
  bool track_overlap = true;                   // follow the SD root into bigger blocks

  ScreenMode screening{ScreenMode::Coverage, 0.90, 2.2e-5, 0};
  ImportanceMethod importance = ImportanceMethod::DiagonalClosedForm;
  AdaptOptions adapt;
  PoolKind pool = PoolKind::SpinAdapted;
  bool filter_pool = true;

  bool with_fci = true;
  double lindep_threshold = 1e-8;
  bool rediag_curve = false;
  bool ground_only = false;  // skip the excited-state blocks (CLI `ground`)
  std::string output_dir;
  int threads = 0;  // 0 = runtime default; 1 = strictly sequential

  void validate() const;  // throws std::invalid_argument
};

RunConfig parse_config_file(const std::string& path);
/// key=value override, same keys as the config file.
void apply_override(RunConfig& config, const std::string& assignment);

/// End-to-end single-point run; returns the result record as JSON text and,
/// when output_dir is set, writes record/report files there.
std::string run_single(const RunConfig& config);

/// One run per parameter value (h2.r or h8.b); per-point failures flag the
/// row and the scan continues. Returns JSON; writes scan.csv when
/// output_dir is set.
std::string run_scan(const RunConfig& config, const std::vector<double>& values);

/// Ranked-importance report (JSON) plus a CSV coverage curve; with
/// rediag_curve also the energy-vs-k curve from repeated block solves.
std::string screen_report(const RunConfig& config);

std::string fcidump_info(const std::string& path, std::optional<std::string> group = std::nullopt);

/// FCIDUMP text for the configured system's integrals (before freezing).
std::string export_fcidump(const RunConfig& config);

/// 1 hartree in eV, used for the dual-unit report columns.
inline constexpr double kHartreeToEv = 27.211386245988;

}  // namespace qeomx
