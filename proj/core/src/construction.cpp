#include "salem/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "salem/errors.hpp"
#include "salem/exp_sum.hpp"
#include "salem/parallel.hpp"

namespace salem {

namespace {

constexpr Int kRootTableLimit = Int{1} << 24;

// Phase lookup for a fixed modulus: tabulated when small enough.
class PhaseSource {
 public:
  explicit PhaseSource(Int period) : period_(period) {
    if (period <= kRootTableLimit) table_.emplace(period);
  }
  Complex operator()(Int residue) const {
    return table_ ? (*table_)[residue] : unit_phase(residue, period_);
  }
  Int period() const { return period_; }

 private:
  Int period_;
  std::optional<RootTable> table_;
};

bool contains(std::span<const Int> sorted, Int v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::string describe(const BlockDeviation& d) {
  std::ostringstream os;
  os << "worst deviation " << d.worst << " at k=" << d.witness_k << " x=" << d.witness_x;
  return os.str();
}

// Rotation-check accumulator: worst |normalized sum| / threshold.
struct RotationWitness {
  double ratio = 0.0;
  Int k = 0;
  int ell = 0;
};

}  // namespace

std::string_view to_string(VerifyMode mode) {
  switch (mode) {
    case VerifyMode::kExhaustive:
      return "exhaustive";
    case VerifyMode::kSampled:
      return "sampled";
    case VerifyMode::kTrivial:
      return "trivial";
  }
  return "unknown";
}

FrequencySet make_frequency_set(Int period, Int budget, Int N, std::uint64_t seed, std::size_t extra) {
  FrequencySet fs;
  fs.period = period;
  if (period <= budget) {
    fs.mode = VerifyMode::kExhaustive;
    return fs;
  }
  fs.mode = VerifyMode::kSampled;
  const Int dense = std::min<Int>(period, Int{1} << 16);
  for (Int k = 0; k < dense; ++k) fs.sample.push_back(k);
  for (Wide scale = 1; scale < period; scale *= N) {
    for (Int c = 1; c < N; ++c) {
      const Wide k = c * scale;
      if (k < period) fs.sample.push_back(static_cast<Int>(k));
    }
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < extra; ++i) {
    fs.sample.push_back(static_cast<Int>(rng.below(static_cast<std::uint64_t>(period))));
  }
  std::sort(fs.sample.begin(), fs.sample.end());
  fs.sample.erase(std::unique(fs.sample.begin(), fs.sample.end()), fs.sample.end());
  return fs;
}

BlockDeviation block_deviation(std::span<const Int> members, Int N, Int t, const FrequencySet& freqs) {
  const Int P = freqs.period;
  const PhaseSource phase(P);
  const double inv_t = 1.0 / static_cast<double>(t);
  const double inv_n = 1.0 / static_cast<double>(N);
  const std::vector<Int> block(members.begin(), members.end());
  const std::size_t n = freqs.size();

  return chunked_reduce(
      n, BlockDeviation{},
      [&](std::size_t b, std::size_t e) {
        BlockDeviation local;
        std::vector<Complex> w(static_cast<std::size_t>(N));
        for (std::size_t i = b; i < e; ++i) {
          const Int k = floor_mod(freqs[i], P);
          Complex full{0.0, 0.0};
          for (Int m = 0; m < N; ++m) {
            w[static_cast<std::size_t>(m)] = phase(mulmod(m, k, P));
            full += w[static_cast<std::size_t>(m)];
          }
          full *= inv_n;
          for (Int x = 0; x < N; ++x) {
            Complex s{0.0, 0.0};
            for (Int y : block) {
              Int idx = x + y;
              if (idx >= N) idx -= N;
              s += w[static_cast<std::size_t>(idx)];
            }
            const double dev = std::abs(s * inv_t - full);
            if (dev > local.worst) local = {dev, k, x};
          }
        }
        return local;
      },
      [](const BlockDeviation& a, const BlockDeviation& b) { return b.worst > a.worst ? b : a; });
}

std::vector<Int> rotate_block(std::span<const Int> members, Int x, Int N) {
  std::vector<Int> out;
  out.reserve(members.size());
  for (Int y : members) out.push_back(floor_mod(x + y, N));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Int> progression_with_fillers(std::span<const Int> progression, Int N, Int t) {
  std::vector<Int> out(progression.begin(), progression.end());
  std::sort(out.begin(), out.end());
  std::vector<Int> fill;
  for (Int v = 0; v < N && static_cast<Int>(out.size() + fill.size()) < t; ++v) {
    if (!contains(out, v)) fill.push_back(v);
  }
  out.insert(out.end(), fill.begin(), fill.end());
  std::sort(out.begin(), out.end());
  return out;
}

BaseBlock build_base_block(const ConstructionParams& p, int j, Rng& rng) {
  if (j < 1) throw InvalidArgument("base blocks are built for j >= 1");
  BaseBlock bb;
  bb.eta = eta(p, j);
  if (bb.eta >= 2.0) {
    bb.members = progression_with_fillers(make_progression(p), p.N, p.t);
    bb.mode = VerifyMode::kTrivial;
    bb.worst_deviation = std::numeric_limits<double>::quiet_NaN();
    return bb;
  }

  const Int P = ipow(p.N, j + 1);
  const FrequencySet freqs =
      make_frequency_set(P, p.k_budget, p.N, Rng::mix(p.seed, 0xB10C, static_cast<std::uint64_t>(j)));
  BlockDeviation best{std::numeric_limits<double>::infinity(), 0, 0};
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    std::vector<Int> sample;
    for (Int y = 0; y < p.N; ++y) {
      if (rng.below(static_cast<std::uint64_t>(p.N)) < static_cast<std::uint64_t>(p.t)) sample.push_back(y);
    }
    const BlockDeviation first = block_deviation(sample, p.N, p.t, freqs);
    if (first.worst < best.worst) best = first;
    if (first.worst > bb.eta / 2.0) continue;

    // Adjust to exactly t members: drop the largest or add the smallest absent.
    while (static_cast<Int>(sample.size()) > p.t) sample.pop_back();
    for (Int v = 0; static_cast<Int>(sample.size()) < p.t && v < p.N; ++v) {
      if (!contains(sample, v)) sample.insert(std::upper_bound(sample.begin(), sample.end(), v), v);
    }
    const BlockDeviation fixed = block_deviation(sample, p.N, p.t, freqs);
    if (fixed.worst > bb.eta) {
      if (freqs.mode == VerifyMode::kExhaustive) {
        throw VerificationFailure("base block j=" + std::to_string(j) +
                                  " violates the eta bound after cardinality fix: " + describe(fixed));
      }
      continue;
    }
    bb.members = std::move(sample);
    bb.mode = freqs.mode;
    bb.verified_k_count = static_cast<Int>(freqs.size());
    bb.worst_deviation = fixed.worst;
    bb.retries = attempt;
    return bb;
  }
  throw RetriesExhausted("base block j=" + std::to_string(j) + ": " + std::to_string(p.max_retries) +
                         " attempts, eta/2=" + std::to_string(bb.eta / 2.0) + ", best " + describe(best));
}

RotationAssignment choose_rotations(const ConstructionParams& p, const std::vector<LevelSet>& levels, int j,
                                    const BaseBlock& base_block, Rng& rng) {
  if (j < 1 || static_cast<std::size_t>(j) >= levels.size()) {
    throw InvalidArgument("choose_rotations needs a completed level j >= 1");
  }
  const LevelSet& level = levels[static_cast<std::size_t>(j)];
  RotationAssignment ra;
  ra.j = j;
  ra.lambda_j = lambda(p, j);
  for (int ell = 1; ell <= j; ++ell) ra.lambda_j_ell.push_back(lambda(p, j, ell));

  // |chi_a(k)| <= max |D_x(k)|, and the normalized partial sums are
  // averages of chi_a, so a bound below every threshold accepts outright.
  const double chi_bound =
      base_block.mode == VerifyMode::kExhaustive ? base_block.worst_deviation : 2.0;
  const double min_threshold = *std::min_element(ra.lambda_j_ell.begin(), ra.lambda_j_ell.end());
  const bool immediate = chi_bound < std::min(ra.lambda_j, min_threshold);

  const Int P = ipow(p.N, j + 1);
  const Int Pj = ipow(p.N, j);
  const std::vector<int> depth = structured_depth(levels, p.N, j);
  const double t = static_cast<double>(p.t);
  const double inv_tj = std::pow(t, -j);
  const FrequencySet freqs =
      make_frequency_set(P, p.k_budget, p.N, Rng::mix(p.seed, 0x7070, static_cast<std::uint64_t>(j)));

  RotationWitness best{std::numeric_limits<double>::infinity(), 0, 0};
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    ra.rotation.assign(level.atoms.size(), 0);
    for (auto& x : ra.rotation) x = static_cast<Int>(rng.below(static_cast<std::uint64_t>(p.N)));
    if (immediate) {
      ra.mode = VerifyMode::kTrivial;
      ra.retries_used = attempt;
      ra.worst_ratio = chi_bound / std::min(ra.lambda_j, min_threshold);
      return ra;
    }

    const PhaseSource big(P);
    const PhaseSource small(Pj);
    const auto& atoms = level.atoms;
    const auto& rot = ra.rotation;
    const auto& members = base_block.members;
    const RotationWitness worst = chunked_reduce(
        freqs.size(), RotationWitness{},
        [&](std::size_t b, std::size_t e) {
          RotationWitness local;
          std::vector<Complex> w(static_cast<std::size_t>(p.N));
          std::vector<Complex> dev(static_cast<std::size_t>(p.N));
          std::vector<Complex> acc(static_cast<std::size_t>(j + 1));
          for (std::size_t i = b; i < e; ++i) {
            const Int k = floor_mod(freqs[i], P);
            Complex full{0.0, 0.0};
            for (Int m = 0; m < p.N; ++m) {
              w[static_cast<std::size_t>(m)] = big(mulmod(m, k, P));
              full += w[static_cast<std::size_t>(m)];
            }
            full /= static_cast<double>(p.N);
            for (Int x = 0; x < p.N; ++x) {
              Complex s{0.0, 0.0};
              for (Int y : members) s += w[static_cast<std::size_t>((x + y) % p.N)];
              dev[static_cast<std::size_t>(x)] = s / t - full;
            }
            std::fill(acc.begin(), acc.end(), Complex{0.0, 0.0});
            const Int kj = floor_mod(k, Pj);
            for (std::size_t a = 0; a < atoms.size(); ++a) {
              acc[static_cast<std::size_t>(depth[a])] +=
                  small(mulmod(atoms[a], kj, Pj)) * dev[static_cast<std::size_t>(rot[a])];
            }
            Complex tail{0.0, 0.0};
            for (int ell = j; ell >= 0; --ell) {
              tail += acc[static_cast<std::size_t>(ell)];
              double ratio;
              if (ell == 0) {
                ratio = std::abs(tail) * inv_tj / ra.lambda_j;
              } else {
                ratio = std::abs(tail) * inv_tj * std::pow(t, ell / 2.0) /
                        ra.lambda_j_ell[static_cast<std::size_t>(ell - 1)];
              }
              if (ratio > local.ratio) local = {ratio, k, ell};
            }
          }
          return local;
        },
        [](const RotationWitness& a, const RotationWitness& b) { return b.ratio > a.ratio ? b : a; });

    if (worst.ratio < best.ratio) best = worst;
    if (worst.ratio < 1.0) {
      ra.mode = freqs.mode;
      ra.verified_k_count = static_cast<Int>(freqs.size());
      ra.worst_ratio = worst.ratio;
      ra.retries_used = attempt;
      return ra;
    }
  }
  std::ostringstream os;
  os << "rotations j=" << j << ": " << p.max_retries << " attempts, best worst ratio " << best.ratio
     << " at k=" << best.k << " l=" << best.ell;
  throw RetriesExhausted(os.str());
}

std::vector<Int> patch_structured(std::span<const Int> rotated_block, std::span<const Int> progression,
                                  Int t) {
  if (static_cast<Int>(rotated_block.size()) != t) {
    throw InvalidArgument("patch_structured: block size differs from t");
  }
  if (static_cast<Int>(progression.size()) > t) {
    throw InvalidArgument("patch_structured: progression longer than t");
  }
  std::vector<Int> prog(progression.begin(), progression.end());
  std::sort(prog.begin(), prog.end());
  std::size_t missing = 0;
  for (Int v : prog) {
    if (!contains(rotated_block, v)) ++missing;
  }
  // Keep the smallest non-progression members.
  std::vector<Int> others;
  for (Int v : rotated_block) {
    if (!contains(prog, v)) others.push_back(v);
  }
  others.resize(others.size() - missing);
  std::vector<Int> out = prog;
  out.insert(out.end(), others.begin(), others.end());
  std::sort(out.begin(), out.end());
  return out;
}

LevelSet build_level(Construction& c, int j, Rng& rng) {
  const ConstructionParams& p = c.params;
  if (static_cast<std::size_t>(j) + 1 != c.levels.size()) {
    throw InvalidArgument("build_level: levels 0..j must be built first");
  }
  const LevelSet& prev = c.levels[static_cast<std::size_t>(j)];
  LevelSet next;
  next.j = j + 1;

  if (j == 0) {
    const auto block = progression_with_fillers(c.progression, p.N, p.t);
    next.atoms = block;
    next.structured = c.progression;
    c.base_blocks.emplace_back(std::nullopt);
    c.rotations.emplace_back(std::nullopt);
    c.audit.push_back({0, "initial_block", VerifyMode::kTrivial, 1, 0, 0.0, 0.0,
                       "A_1 = progression plus smallest fillers"});
  } else {
    BaseBlock bb = build_base_block(p, j, rng);
    c.audit.push_back({j, "base_block", bb.mode, bb.retries + 1, bb.verified_k_count, bb.worst_deviation,
                       bb.eta, bb.mode == VerifyMode::kTrivial ? "eta >= 2" : ""});
    RotationAssignment ra = choose_rotations(p, c.levels, j, bb, rng);
    c.audit.push_back({j, "rotations", ra.mode, ra.retries_used + 1, ra.verified_k_count, ra.worst_ratio, 1.0,
                       ra.mode == VerifyMode::kTrivial ? "lambda_j exceeds the chi bound" : ""});

    next.atoms.reserve(prev.atoms.size() * static_cast<std::size_t>(p.t));
    for (std::size_t i = 0; i < prev.atoms.size(); ++i) {
      const Int a = prev.atoms[i];
      std::vector<Int> block = rotate_block(bb.members, ra.rotation[i], p.N);
      if (contains(prev.structured, a)) block = patch_structured(block, c.progression, p.t);
      for (Int m : block) next.atoms.push_back(a * p.N + m);
    }
    c.base_blocks.emplace_back(std::move(bb));
    c.rotations.emplace_back(std::move(ra));
    for (Int s : prev.structured) {
      for (Int d : c.progression) next.structured.push_back(s * p.N + d);
    }
  }
  std::sort(next.structured.begin(), next.structured.end());
  return next;
}

Construction build_construction(const ConstructionParams& params) {
  validate_params(params);
  Construction c;
  c.params = params;
  c.progression = make_progression(params);
  c.levels.push_back(LevelSet{0, {0}, {0}});
  Rng rng(params.seed);
  for (int j = 0; j < params.j_max; ++j) {
    LevelSet next = build_level(c, j, rng);
    c.levels.push_back(std::move(next));
    const auto violations = check_levels(params, c.progression, c.levels);
    if (!violations.empty()) {
      throw VerificationFailure("internal error: " + violations.front().invariant + " at level " +
                                std::to_string(violations.front().level) + ": " + violations.front().detail);
    }
  }
  return c;
}

std::vector<Int> restricted_atoms(std::span<const LevelSet> levels, Int N, int j, int ell) {
  if (ell < 0 || ell > j) throw InvalidArgument("restricted_atoms needs 0 <= l <= j");
  if (static_cast<std::size_t>(j) >= levels.size()) throw InvalidArgument("level not built");
  const auto& atoms = levels[static_cast<std::size_t>(j)].atoms;
  const auto& prefixes = levels[static_cast<std::size_t>(ell)].structured;
  const Int scale = ipow(N, j - ell);
  std::vector<Int> out;
  for (Int a : atoms) {
    if (contains(prefixes, a / scale)) out.push_back(a);
  }
  return out;
}

std::vector<int> structured_depth(std::span<const LevelSet> levels, Int N, int j) {
  const auto& atoms = levels[static_cast<std::size_t>(j)].atoms;
  std::vector<int> depth(atoms.size(), 0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    Int scale = ipow(N, j);
    for (int ell = 1; ell <= j; ++ell) {
      scale /= N;
      if (!contains(levels[static_cast<std::size_t>(ell)].structured, atoms[i] / scale)) break;
      depth[i] = ell;
    }
  }
  return depth;
}

std::vector<InvariantViolation> check_levels(const ConstructionParams& p, std::span<const Int> progression,
                                             std::span<const LevelSet> levels) {
  std::vector<InvariantViolation> out;
  auto fail = [&](const char* inv, int j, std::string detail) { out.push_back({inv, j, std::move(detail)}); };
  std::vector<Int> prog(progression.begin(), progression.end());
  std::sort(prog.begin(), prog.end());

  for (std::size_t idx = 0; idx < levels.size(); ++idx) {
    const LevelSet& L = levels[idx];
    const int j = static_cast<int>(idx);
    if (L.j != j) fail("cardinality", j, "level index " + std::to_string(L.j) + " stored at position " + std::to_string(j));
    const auto want_atoms = checked_pow(p.t, j);
    const auto want_struct = checked_pow(p.sqrt_t, j);
    const auto period = checked_pow(p.N, j);
    if (!want_atoms || static_cast<Int>(L.atoms.size()) != *want_atoms) {
      fail("cardinality", j, "|atoms| = " + std::to_string(L.atoms.size()));
    }
    if (!want_struct || static_cast<Int>(L.structured.size()) != *want_struct) {
      fail("cardinality", j, "|structured| = " + std::to_string(L.structured.size()));
    }
    auto strictly_sorted = [](const std::vector<Int>& v) {
      return std::adjacent_find(v.begin(), v.end(), [](Int a, Int b) { return a >= b; }) == v.end();
    };
    if (!strictly_sorted(L.atoms) || !strictly_sorted(L.structured)) {
      fail("sorted", j, "atoms or structured atoms not strictly increasing");
      continue;  // binary searches below need sorted input
    }
    if (!L.atoms.empty() && (L.atoms.front() < 0 || !period || L.atoms.back() >= *period)) {
      fail("range", j, "atom outside [0, N^j)");
    }
    for (Int s : L.structured) {
      if (!contains(L.atoms, s)) {
        fail("subset", j, "structured atom " + std::to_string(s) + " is not an atom");
        break;
      }
    }
    if (j == 0) {
      if (L.atoms != std::vector<Int>{0} || L.structured != std::vector<Int>{0}) {
        fail("cardinality", 0, "level 0 must be {0}");
      }
      continue;
    }
    const LevelSet& prev = levels[idx - 1];
    for (Int v : L.atoms) {
      if (!contains(prev.atoms, v / p.N)) {
        fail("nesting", j, "atom " + std::to_string(v) + " has no parent at level " + std::to_string(j - 1));
        break;
      }
    }
    for (Int v : L.atoms) {
      const bool expected = contains(prev.structured, v / p.N) && contains(prog, v % p.N);
      if (expected != contains(L.structured, v)) {
        fail("structured_nesting", j, "atom " + std::to_string(v));
        break;
      }
    }
    for (Int s : L.structured) {
      if (!contains(prev.structured, s / p.N) || !contains(prog, s % p.N)) {
        fail("structured_nesting", j, "structured atom " + std::to_string(s));
        break;
      }
    }
  }
  return out;
}

}  // namespace salem
