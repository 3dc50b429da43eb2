#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "salem/errors.hpp"
#include "salem/params.hpp"
#include "salem/spectral.hpp"

namespace salem {

/// One named inequality or invariant and how it fared.
struct CheckResult {
  std::string module;
  std::string name;
  bool passed = true;
  /// Worst observed LHS / RHS (or count of violations for structural checks).
  double worst = 0.0;
  double threshold = 1.0;
  std::string witness;
};

/// Everything needed to reproduce a run: parameters, seed, command line.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::optional<ConstructionParams> params;
  std::string started_at;
  std::string finished_at;
  std::vector<CheckResult> checks;
  std::vector<std::string> outputs;

  bool all_passed() const;
  ExitCode exit_code() const { return all_passed() ? ExitCode::kPass : ExitCode::kVerificationFailure; }
};

std::string manifest_json(const RunManifest& manifest);
std::string library_version();

struct ConstructOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::vector<std::string> arguments;  // echoed into the manifest
};

/// Builds the construction from a config file and writes level files,
/// construction.cfg and manifest.json. Errors propagate as salem::Error
/// with the failing stage named in the message.
RunManifest cmd_construct(const ConstructOptions& options, std::ostream& log);

struct AnalyzeOptions {
  std::filesystem::path dir;
  std::filesystem::path out_dir;  // empty means dir / "reports"
  bool spectrum = false;
  bool decay = false;
  bool energy = false;
  bool norms = false;
  bool ratio = false;
  std::optional<int> level;       // default j_max
  Int k_max = 4096;               // spectrum rows per weight
  Int decay_k_max = Int{1} << 20;
  double beta = 0.4;
  std::vector<int> r_values{2, 3};
  int ell_max = 2;
  std::vector<double> p_values{2.0, 3.0, 4.0};
  double q = 2.0;
  FrequencyPlan plan;
  std::vector<std::string> arguments;
};

RunManifest cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

struct VerifyOptions {
  std::filesystem::path dir;
  std::filesystem::path manifest_path;  // empty means dir / "verify_manifest.json"
  FrequencyPlan plan;
  std::vector<std::string> arguments;
};

/// Full invariant suite. The manifest lists every check; a failing check
/// names its module, inequality and witness.
RunManifest cmd_verify(const VerifyOptions& options, std::ostream& log);

}  // namespace salem
