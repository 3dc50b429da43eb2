#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fixtures.hpp"
#include "salem/errors.hpp"
#include "salem/level_io.hpp"
#include "salem/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using salem::testing::temp_dir;

fs::path write_config(const fs::path& dir, int j_max) {
  const auto path = dir / "desk.cfg";
  std::ofstream(path) << "# desk parameters\nN0 = 4\nt0 = 2\nn0 = 1\nj_max = " << j_max << "\nseed = 7\n";
  return path;
}

salem::RunManifest construct(const fs::path& root, int j_max) {
  salem::ConstructOptions o;
  o.config = write_config(root, j_max);
  o.out_dir = root / "run";
  std::ostringstream log;
  return salem::cmd_construct(o, log);
}

salem::FrequencyPlan small_plan() {
  salem::FrequencyPlan plan;
  plan.exhaustive_limit = 1 << 12;
  plan.sampled = 256;
  return plan;
}

const salem::CheckResult* find(const salem::RunManifest& m, const std::string& name) {
  for (const auto& c : m.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

TEST(Pipeline, ConstructWritesLevelsAndManifest) {
  const auto root = temp_dir("construct");
  const auto m = construct(root, 4);
  EXPECT_TRUE(m.all_passed());
  for (int j = 0; j <= 4; ++j) EXPECT_TRUE(fs::exists(salem::level_path(root / "run", j)));
  EXPECT_FALSE(fs::exists(salem::level_path(root / "run", 5)));
  EXPECT_TRUE(fs::exists(root / "run" / "manifest.json"));
  const auto j = nlohmann::json::parse(salem::read_file(root / "run" / "manifest.json"));
  EXPECT_EQ(j["command"], "construct");
  EXPECT_EQ(j["params"]["seed"], 7);
  EXPECT_EQ(j["params"]["N"], 16);
  const auto loaded = salem::load_construction(root / "run");
  EXPECT_EQ(loaded.levels, salem::testing::desk(4).levels);
  fs::remove_all(root);
}

TEST(Pipeline, ConstructRejectsInvalidParameters) {
  const auto root = temp_dir("badparams");
  std::ofstream(root / "bad.cfg") << "N0 = 2\nt0 = 2\nn0 = 1\n";
  salem::ConstructOptions o{root / "bad.cfg", root / "run", {}};
  std::ostringstream log;
  try {
    salem::cmd_construct(o, log);
    FAIL() << "expected InvalidArgument";
  } catch (const salem::Error& e) {
    EXPECT_EQ(e.code(), salem::ExitCode::kInvalidInput);
  }
  fs::remove_all(root);
}

TEST(Pipeline, AnalyzeWritesReports) {
  const auto root = temp_dir("analyze");
  construct(root, 3);
  salem::AnalyzeOptions o;
  o.dir = root / "run";
  o.spectrum = o.energy = o.norms = o.ratio = o.decay = true;
  o.k_max = 64;
  o.decay_k_max = 1 << 12;
  o.plan = small_plan();
  std::ostringstream log;
  const auto m = salem::cmd_analyze(o, log);
  const auto reports = o.dir / "reports";
  for (const char* f : {"spectrum.csv", "decay_octaves.csv", "decay.json", "energy.json", "norms.json", "ratio.csv",
                        "thresholds.json", "analysis_manifest.json"}) {
    EXPECT_TRUE(fs::exists(reports / f)) << f;
  }
  // 64 rows per weight: mu plus f_1..f_3 at j = 3.
  std::ifstream csv(reports / "spectrum.csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  EXPECT_EQ(line, "j,weight,k,re,im,abs");
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 4u * 64u);
  const auto energy = nlohmann::json::parse(salem::read_file(reports / "energy.json"));
  ASSERT_FALSE(energy["rows"].empty());
  for (const auto& row : energy["rows"]) {
    EXPECT_TRUE(row.contains("M"));
    EXPECT_TRUE(row.contains("energy_bound"));
    EXPECT_TRUE(row.contains("slack"));
  }
  EXPECT_TRUE(m.all_passed());
  fs::remove_all(root);
}

TEST(Pipeline, VerifyPassesOnFreshConstruction) {
  const auto root = temp_dir("verify");
  construct(root, 3);
  salem::VerifyOptions o;
  o.dir = root / "run";
  o.plan = small_plan();
  std::ostringstream log;
  const auto m = salem::cmd_verify(o, log);
  for (const auto& c : m.checks) EXPECT_TRUE(c.passed) << c.module << ' ' << c.name << ": " << c.witness;
  EXPECT_EQ(m.exit_code(), salem::ExitCode::kPass);
  for (const char* name : {"nesting", "parseval", "consecutive-level-difference", "trivial-decay-bound",
                           "mass-identity", "energy-lower-bound", "hoelder-chain", "ball-condition"}) {
    EXPECT_NE(find(m, name), nullptr) << name;
  }
  EXPECT_TRUE(fs::exists(root / "run" / "verify_manifest.json"));

  // A second run differs only in timestamps.
  const auto again = salem::cmd_verify(o, log);
  ASSERT_EQ(again.checks.size(), m.checks.size());
  for (std::size_t i = 0; i < m.checks.size(); ++i) {
    EXPECT_EQ(again.checks[i].name, m.checks[i].name);
    EXPECT_EQ(again.checks[i].worst, m.checks[i].worst);
  }
  fs::remove_all(root);
}

TEST(Pipeline, VerifyNamesPlantedNestingFault) {
  const auto root = temp_dir("planted");
  construct(root, 3);
  const auto path = salem::level_path(root / "run", 2);
  auto [h, level] = salem::parse_level(salem::read_file(path), path.string());
  // 7 is not a level-1 atom, so 7 * 16 + 3 has no parent.
  level.atoms[5] = 7 * 16 + 3;
  std::sort(level.atoms.begin(), level.atoms.end());
  salem::write_file_atomic(path, salem::format_level(h, level));

  salem::VerifyOptions o;
  o.dir = root / "run";
  o.plan = small_plan();
  std::ostringstream log;
  const auto m = salem::cmd_verify(o, log);
  EXPECT_EQ(m.exit_code(), salem::ExitCode::kVerificationFailure);
  const auto* nesting = find(m, "nesting");
  ASSERT_NE(nesting, nullptr);
  EXPECT_FALSE(nesting->passed);
  EXPECT_NE(nesting->witness.find("level 2"), std::string::npos);
  fs::remove_all(root);
}

TEST(Pipeline, EmptyDirectoryIsUsageError) {
  const auto root = temp_dir("empty");
  salem::VerifyOptions o;
  o.dir = root;
  std::ostringstream log;
  EXPECT_THROW(salem::cmd_verify(o, log), salem::InvalidArgument);
  salem::AnalyzeOptions a;
  a.dir = root;
  a.spectrum = true;
  EXPECT_THROW(salem::cmd_analyze(a, log), salem::InvalidArgument);
  fs::remove_all(root);
}

TEST(Pipeline, CorruptAtomLineNamesTheLine) {
  const auto root = temp_dir("corrupt");
  construct(root, 2);
  const auto path = salem::level_path(root / "run", 1);
  std::string text = salem::read_file(path);
  text.replace(text.find("\n1\n"), 3, "\nx1\n");
  salem::write_file_atomic(path, text);
  salem::VerifyOptions o;
  o.dir = root / "run";
  std::ostringstream log;
  try {
    salem::cmd_verify(o, log);
    FAIL() << "expected ParseError";
  } catch (const salem::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("level_1.txt:3"), std::string::npos);
  }
  fs::remove_all(root);
}

}  // namespace
