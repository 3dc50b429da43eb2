// Command-line front end: construct, analyze, verify.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "salem/errors.hpp"
#include "salem/pipeline.hpp"

namespace {

int to_int(salem::ExitCode code) { return static_cast<int>(code); }

void add_plan_options(CLI::App* cmd, salem::FrequencyPlan& plan) {
  cmd->add_option("--exhaustive-limit", plan.exhaustive_limit, "Check every |k| below this")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sample-limit", plan.sample_limit, "Upper end of the sampled |k| range");
  cmd->add_option("--samples", plan.sampled, "Number of sampled frequencies");
  cmd->add_option("--sample-seed", plan.seed, "Seed for sampled frequencies");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized Salem-type Cantor measures: construction and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", salem::library_version());

  const std::vector<std::string> arguments(argv + 1, argv + argc);

  salem::ConstructOptions construct;
  construct.arguments = arguments;
  auto* c = app.add_subcommand("construct", "Build level sets from a key = value config");
  c->add_option("config", construct.config, "Config file")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", construct.out_dir, "Output directory")->required();

  salem::AnalyzeOptions analyze;
  analyze.arguments = arguments;
  bool analyze_all = false;
  auto* a = app.add_subcommand("analyze", "Write CSV/JSON reports for a construction");
  a->add_option("dir", analyze.dir, "Construction directory")->required();
  a->add_option("-o,--out", analyze.out_dir, "Report directory (default <dir>/reports)");
  a->add_flag("--spectrum", analyze.spectrum, "Fourier coefficients for k < --k-max");
  a->add_flag("--decay", analyze.decay, "Decay checks and per-octave maxima");
  a->add_flag("--energy", analyze.energy, "Additive energy and its lower bound");
  a->add_flag("--norms", analyze.norms, "L^p norms, Hoelder chain, ball condition");
  a->add_flag("--ratio", analyze.ratio, "Restriction ratios and thresholds");
  a->add_flag("--all", analyze_all, "Every report");
  a->add_option("--level", analyze.level, "Level j (default j_max)");
  a->add_option("--k-max", analyze.k_max, "Spectrum rows per weight")->check(CLI::PositiveNumber);
  a->add_option("--decay-k-max", analyze.decay_k_max, "Frequency range of the octave table");
  a->add_option("--beta", analyze.beta, "Decay exponent for the octave table");
  a->add_option("--r", analyze.r_values, "Energy orders")->delimiter(',');
  a->add_option("--ell-max", analyze.ell_max, "Largest structured depth reported");
  a->add_option("--p", analyze.p_values, "Lebesgue exponents")->delimiter(',');
  a->add_option("--q", analyze.q, "Exponent of the L^q(dmu) denominator");
  add_plan_options(a, analyze.plan);

  salem::VerifyOptions verify;
  verify.arguments = arguments;
  auto* v = app.add_subcommand("verify", "Run the full invariant suite");
  v->add_option("dir", verify.dir, "Construction directory")->required();
  v->add_option("--manifest", verify.manifest_path, "Manifest path (default <dir>/verify_manifest.json)");
  add_plan_options(v, verify.plan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : to_int(salem::ExitCode::kInvalidInput);
  }

  try {
    if (c->parsed()) {
      const auto m = salem::cmd_construct(construct, std::cerr);
      std::cout << "wrote " << m.outputs.size() << " files to " << construct.out_dir.string() << '\n';
      return to_int(m.exit_code());
    }
    if (a->parsed()) {
      if (analyze_all) {
        analyze.spectrum = analyze.decay = analyze.energy = analyze.norms = analyze.ratio = true;
      }
      if (!(analyze.spectrum || analyze.decay || analyze.energy || analyze.norms || analyze.ratio)) {
        std::cerr << "analyze: select at least one of --spectrum --decay --energy --norms --ratio --all\n";
        return to_int(salem::ExitCode::kInvalidInput);
      }
      const auto m = salem::cmd_analyze(analyze, std::cerr);
      for (const auto& path : m.outputs) std::cout << path << '\n';
      return to_int(m.exit_code());
    }
    const auto m = salem::cmd_verify(verify, std::cout);
    for (const auto& check : m.checks) {
      if (!check.passed) {
        std::cerr << "verify failed: " << check.module << ' ' << check.name << ": " << check.witness << '\n';
      }
    }
    return to_int(m.exit_code());
  } catch (const salem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return to_int(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return to_int(salem::ExitCode::kInvalidInput);
  }
}
