#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace salem {

using Int = std::int64_t;
using Wide = __int128;
using UWide = unsigned __int128;

/// Largest modulus we allow for exact frequency arithmetic. Products
/// `atom * k` are formed in 128 bits and reduced, so this only bounds
/// the period itself.
inline constexpr Int kMaxExactPeriod = Int{1} << 62;

/// Returns base^exp, or std::nullopt if it exceeds `limit`.
std::optional<Int> checked_pow(Int base, int exp, Int limit = kMaxExactPeriod);

/// base^exp; throws ResourceLimit on overflow of kMaxExactPeriod.
Int ipow(Int base, int exp);

/// (a * b) mod m for 0 <= a, b and m > 0, exact for 64-bit inputs.
inline Int mulmod(Int a, Int b, Int m) {
  if (((a | b) >> 31) == 0) return (a * b) % m;
  return static_cast<Int>((static_cast<Wide>(a) * b) % m);
}

/// Floor modulus, always in [0, m).
inline Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

/// The dimension exponent log(t0)/log(N0), kept as the integer pair it
/// is derived from alongside its floating value.
struct LogRatio {
  Int numerator_base = 0;    // t0
  Int denominator_base = 0;  // N0
  double value = 0.0;
};

struct ConstructionParams {
  Int N0 = 0;
  Int t0 = 0;
  int n0 = 0;
  Int N = 0;       // N0^(2 n0)
  Int t = 0;       // t0^(2 n0)
  Int sqrt_t = 0;  // t0^n0, length of the progression
  LogRatio alpha;
  int j_max = 1;
  std::uint64_t seed = 0;
  double c_eta = 192.0;
  double c_rot = 6144.0;
  Int ap_offset = 0;
  Int ap_gap = 1;
  Int k_budget = Int{1} << 20;
  int max_retries = 64;
  Int fft_budget = Int{1} << 26;
};

/// Optional values that replace the derived defaults.
struct ParamOverrides {
  std::optional<int> j_max;
  std::optional<std::uint64_t> seed;
  std::optional<double> c_eta;
  std::optional<double> c_rot;
  std::optional<Int> ap_offset;
  std::optional<Int> ap_gap;
  std::optional<Int> k_budget;
  std::optional<int> max_retries;
  std::optional<Int> fft_budget;
};

/// Computes every derived quantity exactly and validates the invariants.
/// Throws InvalidArgument for t0 >= N0, n0 < 1, or a progression that does
/// not fit in [0, N); ResourceLimit when N^(j_max+1) overflows.
ConstructionParams derive_params(Int N0, Int t0, int n0, const ParamOverrides& overrides = {});

/// Re-checks the invariants of an already populated parameter set.
void validate_params(const ConstructionParams& params);

/// {ap_offset + i * ap_gap : 0 <= i < sqrt(t)}.
std::vector<Int> make_progression(const ConstructionParams& params);

/// Base-block tolerance: eta_j^2 = c_eta / t * ln(8 N^(j+2)).
double eta(const ConstructionParams& params, int j);

/// Rotation thresholds. lambda_j = c_rot t^(-(j+1)/2) ln(8 N^(j+1));
/// lambda_{j,l} carries an extra factor t^(l/4).
double lambda(const ConstructionParams& params, int j);
double lambda(const ConstructionParams& params, int j, int ell);

/// ln(8 N^e) computed without forming N^e.
double log8_pow(Int N, int e);

}  // namespace salem
