#include "salem/pipeline.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "salem/bspline.hpp"
#include "salem/construction.hpp"
#include "salem/energy.hpp"
#include "salem/level_io.hpp"
#include "salem/norms.hpp"

#ifndef SALEM_VERSION
#define SALEM_VERSION "0.0.0"
#endif

namespace salem {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Shortest decimal that round-trips.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// JSON has no inf/nan; those become strings.
json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

json jwide(UWide v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return to_string(static_cast<Wide>(v));
}

json params_json(const ConstructionParams& p) {
  return json{{"N0", p.N0},
              {"t0", p.t0},
              {"n0", p.n0},
              {"N", p.N},
              {"t", p.t},
              {"sqrt_t", p.sqrt_t},
              {"alpha", {{"numerator_base", p.alpha.numerator_base},
                         {"denominator_base", p.alpha.denominator_base},
                         {"value", p.alpha.value}}},
              {"j_max", p.j_max},
              {"seed", p.seed},
              {"c_eta", p.c_eta},
              {"c_rot", p.c_rot},
              {"ap_offset", p.ap_offset},
              {"ap_gap", p.ap_gap},
              {"k_budget", p.k_budget},
              {"max_retries", p.max_retries},
              {"fft_budget", p.fft_budget}};
}

void write_report(RunManifest& m, const fs::path& path, const std::string& text) {
  write_file_atomic(path, text);
  m.outputs.push_back(path.string());
}

void log_check(std::ostream& log, const CheckResult& c) {
  log << (c.passed ? "PASS " : "FAIL ") << c.module << ' ' << c.name << " worst=" << num(c.worst)
      << " threshold=" << num(c.threshold);
  if (!c.witness.empty()) log << " (" << c.witness << ')';
  log << std::endl;
}

void add(RunManifest& m, std::ostream& log, CheckResult c) {
  log_check(log, c);
  m.checks.push_back(std::move(c));
}

// Ratio check: passes when worst <= threshold.
CheckResult ratio_check(std::string module, std::string name, double worst, double threshold, std::string witness) {
  return {std::move(module), std::move(name), worst <= threshold, worst, threshold, std::move(witness)};
}

std::vector<CheckResult> structural_checks(const Construction& c) {
  static const char* kNames[] = {"cardinality", "sorted", "range", "subset", "nesting", "structured_nesting"};
  const auto violations = check_levels(c.params, c.progression, c.levels);
  std::vector<CheckResult> out;
  for (const char* name : kNames) {
    CheckResult r{"construction", name, true, 0.0, 0.0, ""};
    for (const auto& v : violations) {
      if (v.invariant != name) continue;
      r.passed = false;
      r.worst += 1.0;
      if (r.witness.empty()) r.witness = "level " + std::to_string(v.level) + ": " + v.detail;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string witness_k(int j, int ell, Int k) {
  return "j=" + std::to_string(j) + " l=" + std::to_string(ell) + " k=" + std::to_string(k);
}

// Digit set under one unstructured parent of level j + 1, if any.
std::optional<std::vector<Int>> free_digit_block(const Construction& c, int j) {
  const auto& parent = c.levels[static_cast<std::size_t>(j)];
  const auto& child = c.levels[static_cast<std::size_t>(j + 1)].atoms;
  const Int N = c.params.N;
  for (Int a : parent.atoms) {
    if (std::binary_search(parent.structured.begin(), parent.structured.end(), a)) continue;
    std::vector<Int> digits;
    auto it = std::lower_bound(child.begin(), child.end(), a * N);
    for (; it != child.end() && *it < (a + 1) * N; ++it) digits.push_back(*it - a * N);
    return digits;
  }
  return std::nullopt;
}

// Shared verification suite used by verify and by analyze --decay/--energy/--norms.
struct SuiteSelection {
  bool spectral = true;
  bool energy = true;
  bool norms = true;
  int level = 0;
  std::vector<int> r_values{2, 3};
  int ell_max = 1 << 20;
};

void spectral_checks(const Construction& c, const SuiteSelection& sel, const FrequencyPlan& plan, RunManifest& m,
                     std::ostream& log) {
  const auto& p = c.params;
  for (int j = 0; j <= sel.level; ++j) {
    const auto& atoms = c.levels[static_cast<std::size_t>(j)].atoms;
    const auto pr = parseval_check(atoms, ipow(p.N, j), p.fft_budget);
    add(m, log, ratio_check("spectral", "parseval", pr.relative_error, 1e-6, "j=" + std::to_string(j)));

    double worst = 0.0;
    std::string wit;
    for (int ell = 0; ell <= j; ++ell) {
      const double want = std::pow(static_cast<double>(p.t), -ell / 2.0);
      const double err = std::abs(f_mu_hat(c, j, ell, 0) - Complex{want, 0.0});
      if (err >= worst) {
        worst = err;
        wit = "j=" + std::to_string(j) + " l=" + std::to_string(ell);
      }
    }
    add(m, log, ratio_check("spectral", "normalization", worst, 1e-12, wit));
  }
  for (int j = 0; j < sel.level; ++j) {
    const auto tel = telescope_check(c, j, plan);
    const auto worst = std::max_element(tel.entries.begin(), tel.entries.end(),
                                        [](const auto& a, const auto& b) { return a.max_ratio < b.max_ratio; });
    add(m, log,
        ratio_check("spectral", "consecutive-level-difference", worst->max_ratio, 1.0,
                    witness_k(j, worst->ell, worst->witness_k) + " C=" + num(tel.constant)));
  }
  for (int h = 1; h <= sel.level; ++h) {
    const auto tb = trivial_bound_check(c, h, plan);
    const auto worst = std::max_element(tb.entries.begin(), tb.entries.end(),
                                        [](const auto& a, const auto& b) { return a.max_ratio < b.max_ratio; });
    add(m, log,
        ratio_check("spectral", "trivial-decay-bound", worst->max_ratio, 1.0 + 1e-12,
                    witness_k(h, worst->ell, worst->witness_k)));
  }
  for (int j = 1; j < sel.level; ++j) {
    const auto block = free_digit_block(c, j);
    if (!block) continue;
    const Int P = ipow(p.N, j + 1);
    const auto freqs = make_frequency_set(P, p.k_budget, p.N, Rng::mix(p.seed, 0xB10C, static_cast<std::uint64_t>(j)));
    const auto dev = block_deviation(*block, p.N, p.t, freqs);
    add(m, log,
        ratio_check("construction", "digit-block-uniformity", dev.worst, eta(p, j),
                    "j=" + std::to_string(j) + " k=" + std::to_string(dev.witness_k) +
                        " x=" + std::to_string(dev.witness_x) + " mode=" + std::string(to_string(freqs.mode))));
  }
}

void energy_checks(const Construction& c, const SuiteSelection& sel, RunManifest& m, std::ostream& log,
                   json* report) {
  const auto& p = c.params;
  for (int ell = 0; ell <= std::min(sel.level, sel.ell_max); ++ell) {
    const auto mass = lq_mass(c, ell, 2.0);
    std::string wit;
    for (const auto& lv : mass.levels) {
      if (lv.count != lv.expected && wit.empty()) {
        wit = "j=" + std::to_string(lv.j) + " count=" + std::to_string(lv.count) +
              " expected=" + std::to_string(lv.expected);
      }
    }
    add(m, log, {"energy", "mass-identity", mass.exact(), mass.exact() ? 0.0 : 1.0, 0.0,
                 wit.empty() ? "l=" + std::to_string(ell) : wit});
  }
  for (int r : sel.r_values) {
    double worst_energy = 0.0, worst_support = 0.0, worst_l2r = 0.0;
    bool energy_ok = true;
    std::string w_energy, w_support, w_l2r;
    for (int j = 0; j <= sel.level; ++j) {
      for (int ell = 0; ell <= std::min(j, sel.ell_max); ++ell) {
        const auto Y = restricted_atoms(c.levels, p.N, j, ell);
        const auto table = sum_distribution(Y, r, p.fft_budget);
        const auto bound = energy_lower_bound(p, j, ell, r);
        const bool holds = energy_bound_holds(table.M, p, j, ell, r);
        const double inv_slack = static_cast<double>(bound.bound / static_cast<long double>(table.M));
        const std::string here = "j=" + std::to_string(j) + " l=" + std::to_string(ell) + " r=" + std::to_string(r);
        if (!holds) energy_ok = false;
        if (inv_slack >= worst_energy) {
          worst_energy = inv_slack;
          w_energy = here;
        }
        const double support_ratio =
            static_cast<double>(static_cast<long double>(table.support_size()) / bound.sumset_bound);
        if (support_ratio >= worst_support) {
          worst_support = support_ratio;
          w_support = here;
        }
        const auto exact = exact_l2r_norm(Y, ipow(p.N, j), p.t, j, r);
        const auto lower = l2r_lower_bound(p, ell, r);
        const double l2r_ratio = static_cast<double>(lower.value / exact.value);
        if (l2r_ratio >= worst_l2r) {
          worst_l2r = l2r_ratio;
          w_l2r = here + (lower.in_hypothesis ? "" : " (r <= 1/alpha)");
        }
        if (report) {
          report->push_back({{"j", j},
                             {"ell", ell},
                             {"r", r},
                             {"M", jwide(table.M)},
                             {"support_size", table.support_size()},
                             {"energy_bound", jnum(static_cast<double>(bound.bound))},
                             {"sumset_bound", jnum(static_cast<double>(bound.sumset_bound))},
                             {"holder_floor", jnum(static_cast<double>(bound.holder_floor))},
                             {"cauchy_schwarz_floor", jnum(static_cast<double>(cauchy_schwarz_floor(table)))},
                             {"slack", jnum(static_cast<double>(static_cast<long double>(table.M) / bound.bound))},
                             {"holds", holds},
                             {"l2r_exact", jnum(static_cast<double>(exact.value))},
                             {"l2r_d0_term", jnum(static_cast<double>(exact.d0_term))},
                             {"l2r_lower_bound", jnum(static_cast<double>(lower.value))},
                             {"l2r_lower_bound_proof_form", jnum(static_cast<double>(lower.proof_form))},
                             {"r_in_hypothesis", lower.in_hypothesis}});
        }
      }
    }
    add(m, log, {"energy", "energy-lower-bound", energy_ok, worst_energy, 1.0, w_energy});
    add(m, log, ratio_check("energy", "sumset-support-bound", worst_support, 1.0, w_support));
    add(m, log, ratio_check("energy", "l2r-lower-bound", worst_l2r, 1.0, w_l2r));
  }
}

void norm_checks(const Construction& c, const SuiteSelection& sel, const std::vector<double>& ps, RunManifest& m,
                 std::ostream& log, json* report) {
  const auto& p = c.params;
  const int j = sel.level;
  const int r = default_energy_order(p, *std::max_element(ps.begin(), ps.end()));
  double worst_chain = 0.0, worst_bound = 0.0, worst_sup = 0.0;
  std::string w_chain, w_bound, w_sup;
  for (int ell = 0; ell <= std::min(j, sel.ell_max); ++ell) {
    for (double pv : ps) {
      if (pv > 2.0 * r) continue;
      const auto h = holder_chain_check(c, j, ell, pv, r);
      const std::string here =
          "j=" + std::to_string(j) + " l=" + std::to_string(ell) + " p=" + num(pv) + " r=" + std::to_string(r);
      if (h.l2r / h.rhs >= worst_chain) {
        worst_chain = h.l2r / h.rhs;
        w_chain = here + " slack=" + num(h.slack);
      }
      if (h.lower_bound / h.lp >= worst_bound) {
        worst_bound = h.lower_bound / h.lp;
        w_bound = here;
      }
      const double sup_ratio = std::max(h.sup_on_grid, h.phi_at_zero) / h.sup_bound;
      if (sup_ratio >= worst_sup) {
        worst_sup = sup_ratio;
        w_sup = here;
      }
      if (report) {
        report->push_back({{"j", j},
                           {"ell", ell},
                           {"p", pv},
                           {"r", r},
                           {"l2r", jnum(h.l2r)},
                           {"lp", jnum(h.lp)},
                           {"lp_method", std::string(to_string(h.lp_method))},
                           {"sup_bound", jnum(h.sup_bound)},
                           {"phi_at_zero", jnum(h.phi_at_zero)},
                           {"sup_on_grid", jnum(h.sup_on_grid)},
                           {"holder_rhs", jnum(h.rhs)},
                           {"holder_slack", jnum(h.slack)},
                           {"implied_lower", jnum(h.implied_lower)},
                           {"lp_lower_bound", jnum(h.lower_bound)},
                           {"chain_holds", h.chain_holds()},
                           {"lower_bound_holds", h.bound_holds()}});
      }
    }
  }
  add(m, log, ratio_check("norms", "hoelder-chain", worst_chain, 1.0 + 1e-12, w_chain));
  add(m, log, ratio_check("norms", "lp-lower-bound", worst_bound, 1.0, w_bound));
  add(m, log, ratio_check("norms", "sup-at-zero", worst_sup, 1.0 + 1e-12, w_sup));

  const auto ball = ball_condition_report(c, j);
  std::string w_ball;
  double worst_exact = 0.0;
  for (const auto& lv : ball.levels) {
    if (lv.max_ratio >= worst_exact) {
      worst_exact = lv.max_ratio;
      w_ball = "m=" + std::to_string(lv.m) + " count=" + std::to_string(lv.max_count);
    }
  }
  add(m, log, {"norms", "ball-condition", ball.exact_ratio_is_one(), worst_exact, 1.0, w_ball});
  add(m, log, ratio_check("norms", "ball-condition-straddle", ball.sup_straddle(), 2.0, "j=" + std::to_string(j)));
}

Construction load_or_throw(const fs::path& dir) {
  if (dir.empty()) throw InvalidArgument("no construction directory given");
  if (fs::is_directory(dir) && fs::is_empty(dir)) throw InvalidArgument("empty directory: " + dir.string());
  return load_construction(dir);
}

}  // namespace

bool RunManifest::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string library_version() { return SALEM_VERSION; }

std::string manifest_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["arguments"] = m.arguments;
  j["params"] = m.params ? params_json(*m.params) : json(nullptr);
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["versions"] = {{"salem", library_version()}, {"fftw", std::string(fftw_version)}};
  json checks = json::array();
  for (const auto& c : m.checks) {
    checks.push_back({{"module", c.module},
                      {"check", c.name},
                      {"passed", c.passed},
                      {"worst", jnum(c.worst)},
                      {"threshold", jnum(c.threshold)},
                      {"witness", c.witness}});
  }
  j["checks"] = checks;
  j["passed"] = m.all_passed();
  j["outputs"] = m.outputs;
  return j.dump(2) + '\n';
}

RunManifest cmd_construct(const ConstructOptions& o, std::ostream& log) {
  RunManifest m;
  m.command = "construct";
  m.arguments = o.arguments;
  m.started_at = now_utc();
  if (o.out_dir.empty()) throw InvalidArgument("construct: --out is required");
  const auto params = parse_config(read_file(o.config), o.config.string());
  m.params = params;
  const Construction c = build_construction(params);
  save_construction(o.out_dir, c);
  m.outputs.push_back((o.out_dir / kConfigFile).string());
  for (const auto& level : c.levels) m.outputs.push_back(level_path(o.out_dir, level.j).string());
  for (const auto& a : c.audit) {
    CheckResult r{"construction", a.stage, true, a.worst_value, a.threshold,
                  "j=" + std::to_string(a.level) + " mode=" + std::string(to_string(a.mode)) +
                      " attempts=" + std::to_string(a.attempts) +
                      " frequencies=" + std::to_string(a.checked_frequencies) + (a.note.empty() ? "" : " " + a.note)};
    add(m, log, std::move(r));
  }
  for (auto& r : structural_checks(c)) add(m, log, std::move(r));
  m.finished_at = now_utc();
  write_file_atomic(o.out_dir / kManifestFile, manifest_json(m));
  return m;
}

RunManifest cmd_analyze(const AnalyzeOptions& o, std::ostream& log) {
  RunManifest m;
  m.command = "analyze";
  m.arguments = o.arguments;
  m.started_at = now_utc();
  const Construction c = load_or_throw(o.dir);
  m.params = c.params;
  const auto& p = c.params;
  const int level = o.level.value_or(p.j_max);
  if (level < 0 || level > p.j_max) throw InvalidArgument("analyze: --level must lie in [0, j_max]");
  if (o.k_max < 1 || o.decay_k_max < 2) throw InvalidArgument("analyze: frequency ranges must be positive");
  const fs::path out = o.out_dir.empty() ? o.dir / "reports" : o.out_dir;
  fs::create_directories(out);

  SuiteSelection sel;
  sel.level = level;
  sel.r_values = o.r_values;
  sel.ell_max = o.ell_max;

  if (o.spectrum) {
    std::string csv = "j,weight,k,re,im,abs\n";
    for (int ell = 0; ell <= level; ++ell) {
      const LevelTransform tr(c, level, Weight::f(ell));
      const std::string name = ell == 0 ? "mu" : "f" + std::to_string(ell);
      for (Int k = 0; k < o.k_max; ++k) {
        const Complex v = tr.at_integer(k);
        csv += std::to_string(level) + ',' + name + ',' + std::to_string(k) + ',' + num(v.real()) + ',' +
               num(v.imag()) + ',' + num(std::abs(v)) + '\n';
      }
    }
    write_report(m, out / "spectrum.csv", csv);
  }

  if (o.decay) {
    RunManifest sub;
    std::ostringstream quiet;
    spectral_checks(c, sel, o.plan, sub, quiet);
    std::vector<Int> ks(static_cast<std::size_t>(o.decay_k_max));
    for (Int k = 0; k < o.decay_k_max; ++k) ks[static_cast<std::size_t>(k)] = k;
    const auto spec = compute_spectrum(c, level, Weight::mu(), std::move(ks));
    const auto dr = decay_report(spec, o.beta);
    std::string csv = "octave,k_lo,k_hi,max_abs,argmax_k,max_scaled\n";
    for (const auto& oc : dr.octaves) {
      csv += std::to_string(oc.index) + ',' + std::to_string(oc.k_lo) + ',' + std::to_string(oc.k_hi) + ',' +
             num(oc.max_abs) + ',' + std::to_string(oc.argmax_k) + ',' + num(oc.max_scaled) + '\n';
    }
    write_report(m, out / "decay_octaves.csv", csv);
    json checks = json::array();
    for (const auto& ch : sub.checks) {
      checks.push_back({{"inequality", ch.name},
                        {"passed", ch.passed},
                        {"worst", jnum(ch.worst)},
                        {"threshold", jnum(ch.threshold)},
                        {"slack", jnum(ch.threshold - ch.worst)},
                        {"witness", ch.witness}});
    }
    json doc{{"level", level},
             {"beta", o.beta},
             {"sup_constant", jnum(dr.sup_constant)},
             {"fitted_exponent", jnum(dr.fitted_exponent)},
             {"checks", checks}};
    write_report(m, out / "decay.json", doc.dump(2) + '\n');
    for (auto& ch : sub.checks) add(m, log, std::move(ch));
  }

  if (o.energy) {
    json rows = json::array();
    sel.ell_max = o.ell_max;
    energy_checks(c, sel, m, log, &rows);
    json doc{{"inequality", "energy-lower-bound"}, {"rows", rows}};
    write_report(m, out / "energy.json", doc.dump(2) + '\n');
  }

  if (o.norms) {
    json rows = json::array();
    norm_checks(c, sel, o.p_values, m, log, &rows);
    json masses = json::array();
    for (int ell = 0; ell <= std::min(level, o.ell_max); ++ell) {
      const auto lm = lq_mass(c, ell, o.q);
      masses.push_back({{"ell", ell}, {"q", o.q}, {"norm", lm.norm}, {"mass", lm.mass}, {"exact", lm.exact()}});
    }
    json doc{{"inequality", "hoelder-chain"}, {"rows", rows}, {"lq_mass", masses}};
    write_report(m, out / "norms.json", doc.dump(2) + '\n');
  }

  if (o.ratio) {
    std::string csv = "j,ell,p,q,numerator,denominator,ratio,method,r,lp_lower_bound,slack,failing_range,pq_region\n";
    for (int ell = 0; ell <= std::min(level, o.ell_max); ++ell) {
      for (double pv : o.p_values) {
        const auto rr = restriction_ratio(c, level, ell, pv, o.q);
        csv += std::to_string(level) + ',' + std::to_string(ell) + ',' + num(pv) + ',' + num(o.q) + ',' +
               num(rr.numerator) + ',' + num(rr.denominator) + ',' + num(rr.ratio) + ',' +
               std::string(to_string(rr.method)) + ',' + std::to_string(rr.r) + ',' + num(rr.lower_bound) + ',' +
               num(rr.slack) + ',' + (rr.failing_range ? "1" : "0") + ',' + (rr.pq_region ? "1" : "0") + '\n';
        add(m, log,
            {"norms", "lp-lower-bound", rr.slack >= 1.0, rr.slack, 1.0,
             "j=" + std::to_string(level) + " l=" + std::to_string(ell) + " p=" + num(pv) + " (slack >= 1)"});
      }
    }
    write_report(m, out / "ratio.csv", csv);
    const auto th = thresholds(p.alpha.value);
    json doc{{"alpha", p.alpha.value},
             {"p_necessary", th.p_necessary},
             {"p_sharp", th.p_sharp},
             {"p_mock_at_alpha", th.p_mock_at_alpha},
             {"pq_bound", jnum(pq_bound(p.alpha.value, o.q))},
             {"q", o.q}};
    write_report(m, out / "thresholds.json", doc.dump(2) + '\n');
  }

  m.finished_at = now_utc();
  write_file_atomic(out / "analysis_manifest.json", manifest_json(m));
  return m;
}

RunManifest cmd_verify(const VerifyOptions& o, std::ostream& log) {
  RunManifest m;
  m.command = "verify";
  m.arguments = o.arguments;
  m.started_at = now_utc();
  const Construction c = load_or_throw(o.dir);
  m.params = c.params;
  bool structural_ok = true;
  for (auto& r : structural_checks(c)) {
    structural_ok = structural_ok && r.passed;
    add(m, log, std::move(r));
  }
  if (structural_ok) {
    SuiteSelection sel;
    sel.level = c.params.j_max;
    spectral_checks(c, sel, o.plan, m, log);
    energy_checks(c, sel, m, log, nullptr);
    norm_checks(c, sel, {2.0, 3.0, 4.0}, m, log, nullptr);
  } else {
    log << "structural invariants failed; analytic checks skipped\n";
  }
  m.finished_at = now_utc();
  const fs::path path = o.manifest_path.empty() ? o.dir / "verify_manifest.json" : o.manifest_path;
  m.outputs.push_back(path.string());
  write_file_atomic(path, manifest_json(m));
  return m;
}

}  // namespace salem
