#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "salem/params.hpp"
#include "salem/rng.hpp"

namespace salem {

/// Atoms of A_j and its structured subset P_j, stored as exact integers:
/// the atom value v stands for the point v / N^j of [0, 1).
struct LevelSet {
  int j = 0;
  std::vector<Int> atoms;       // strictly increasing, in [0, N^j)
  std::vector<Int> structured;  // strictly increasing subset of atoms

  bool operator==(const LevelSet&) const = default;
};

/// How an inequality was checked over frequencies.
enum class VerifyMode { kExhaustive, kSampled, kTrivial };

std::string_view to_string(VerifyMode mode);

/// Frequencies over which a periodic inequality is checked. Exhaustive
/// sets cover [0, period); sampled sets are listed explicitly.
struct FrequencySet {
  VerifyMode mode = VerifyMode::kExhaustive;
  Int period = 1;
  std::vector<Int> sample;

  std::size_t size() const {
    return mode == VerifyMode::kExhaustive ? static_cast<std::size_t>(period) : sample.size();
  }
  Int operator[](std::size_t i) const {
    return mode == VerifyMode::kExhaustive ? static_cast<Int>(i) : sample[i];
  }
};

/// Exhaustive when period <= budget. Otherwise every k < 2^16, every
/// c * N^i below the period (1 <= c < N), and `extra` seeded uniform draws.
FrequencySet make_frequency_set(Int period, Int budget, Int N, std::uint64_t seed,
                                std::size_t extra = 4096);

/// The digit block B_{j+1} (scaled by N^{j+1}) that every rotated copy
/// B_{j+1,x} is taken from.
struct BaseBlock {
  std::vector<Int> members;  // t distinct values in [0, N)
  double eta = 0.0;
  Int verified_k_count = 0;
  VerifyMode mode = VerifyMode::kTrivial;
  /// max over checked (k, x) of |S_{B_x}(k)/t - S_[N](k)/N|; NaN when trivial.
  double worst_deviation = 0.0;
  int retries = 0;
};

/// Rotation x(a) for every atom of A_j, parallel to LevelSet::atoms.
struct RotationAssignment {
  int j = 0;
  std::vector<Int> rotation;
  double lambda_j = 0.0;
  std::vector<double> lambda_j_ell;  // index l - 1 for l = 1..j
  int retries_used = 0;
  VerifyMode mode = VerifyMode::kTrivial;
  Int verified_k_count = 0;
  /// max over checked k and weights of |normalized sum| / threshold.
  double worst_ratio = 0.0;
};

struct AuditEntry {
  int level = 0;  // source level j of the step building j + 1
  std::string stage;
  VerifyMode mode = VerifyMode::kTrivial;
  int attempts = 0;
  Int checked_frequencies = 0;
  double worst_value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct Construction {
  ConstructionParams params;
  std::vector<Int> progression;
  std::vector<LevelSet> levels;  // levels[j] for j = 0..j_max
  /// Indexed by source level j (empty for j = 0, where A_1 is fixed).
  std::vector<std::optional<BaseBlock>> base_blocks;
  std::vector<std::optional<RotationAssignment>> rotations;
  std::vector<AuditEntry> audit;
};

/// Deviation of a digit block from the uniform block over a frequency set.
struct BlockDeviation {
  double worst = 0.0;
  Int witness_k = 0;
  Int witness_x = 0;
};

/// max over k in freqs, x in [0, N) of |S_{B_x}(k)/t - S_[N](k)/N| with
/// phases taken modulo `freqs.period` (= N^{j+1}).
BlockDeviation block_deviation(std::span<const Int> members, Int N, Int t, const FrequencySet& freqs);

/// Sorted {(x + y) mod N : y in members}.
std::vector<Int> rotate_block(std::span<const Int> members, Int x, Int N);

/// Sorted progression plus the smallest absent values of [0, N) until
/// the size reaches t.
std::vector<Int> progression_with_fillers(std::span<const Int> progression, Int N, Int t);

BaseBlock build_base_block(const ConstructionParams& params, int j, Rng& rng);

/// Draws x(a) per atom and accepts only when the rotated blocks keep the
/// global and every structured partial sum below their thresholds.
RotationAssignment choose_rotations(const ConstructionParams& params, const std::vector<LevelSet>& levels,
                                    int j, const BaseBlock& base_block, Rng& rng);

/// B_{x} joined with the progression, dropping the largest non-progression
/// members so the size stays t.
std::vector<Int> patch_structured(std::span<const Int> rotated_block, std::span<const Int> progression,
                                  Int t);

/// Builds level j + 1 from levels 0..j and appends bookkeeping to `c`.
LevelSet build_level(Construction& c, int j, Rng& rng);

/// Levels 0..j_max, deterministic in (params, seed).
Construction build_construction(const ConstructionParams& params);

/// Atoms of level j lying in F_ell: those whose leading ell digits form an
/// atom of structured(ell).
std::vector<Int> restricted_atoms(std::span<const LevelSet> levels, Int N, int j, int ell);

/// For each atom of level j, the largest l <= j with the atom in F_l.
std::vector<int> structured_depth(std::span<const LevelSet> levels, Int N, int j);

/// Invariant breach found by check_levels.
struct InvariantViolation {
  std::string invariant;  // cardinality, sorted, range, subset, nesting, structured_nesting
  int level = 0;
  std::string detail;
};

/// Structural invariants of a level sequence.
std::vector<InvariantViolation> check_levels(const ConstructionParams& params,
                                             std::span<const Int> progression,
                                             std::span<const LevelSet> levels);

}  // namespace salem
