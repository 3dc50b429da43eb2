#pragma once

#include <optional>
#include <span>
#include <vector>

#include "salem/construction.hpp"
#include "salem/exp_sum.hpp"

namespace salem {

/// Which measure a spectrum belongs to: mu_j itself (ell = 0, F_0 = [0, 1))
/// or the restriction f_ell dmu_j.
struct Weight {
  int ell = 0;
  static Weight mu() { return {0}; }
  static Weight f(int ell) { return {ell}; }
  bool is_mu() const { return ell == 0; }
};

/// Fourier transform of f_ell dmu_j on a rational lattice (1/q) Z:
///   xi -> e^(-pi i xi / N^j) sinc(xi / N^j) t^(-j) sum_{a in F_ell cap A_j} e^(-2 pi i a xi),
/// with atoms a given at scale N^j. The exponential sums are tabulated
/// once (period q N^j) so every lattice point costs O(1).
class LevelTransform {
 public:
  LevelTransform(const Construction& c, int j, Weight weight, Int q = 1);

  /// Coefficient at integer frequency k.
  Complex at_integer(Int k) const { return at_lattice(k * q_); }
  /// Value at xi = m / q.
  Complex at_lattice(Int m) const;
  /// Exponential sum part at xi = m / q (period q N^j in m).
  Complex sum_at_lattice(Int m) const { return sums_(m); }

  int level() const { return j_; }
  Weight weight() const { return weight_; }
  Int q() const { return q_; }
  Int scale() const { return scale_; }  // N^j
  std::size_t atom_count() const { return sums_.atom_count(); }
  /// Total mass t^(-j) |F_ell cap A_j| (= t^(-ell/2) on a valid construction).
  double mass() const { return static_cast<double>(atom_count()) * inv_tj_; }
  double inv_tj() const { return inv_tj_; }

 private:
  int j_;
  Weight weight_;
  Int q_;
  Int scale_;
  double inv_tj_;
  ExpSumEvaluator sums_;
};

/// Coefficient of mu_j at integer k: prefactor * t^(-j) S_{A_j}(k).
Complex mu_hat(const Construction& c, int j, Int k);

/// Coefficient of f_ell dmu_j at integer k. Throws InvalidArgument if ell > j.
Complex f_mu_hat(const Construction& c, int j, int ell, Int k);

/// Closed form at a real frequency.
Complex f_mu_hat_real(const Construction& c, int j, int ell, double xi);

/// Coefficients over an explicit frequency list.
struct Spectrum {
  int j = 0;
  Weight weight;
  std::vector<Int> frequencies;
  std::vector<Complex> coefficients;
};

Spectrum compute_spectrum(const Construction& c, int j, Weight weight, std::vector<Int> frequencies);

/// sum_{k in [0, period)} |S(k)|^2 against period * |atoms|.
struct ParsevalResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
};
ParsevalResult parseval_check(std::span<const Int> atoms, Int period, Int fft_budget = Int{1} << 26);

/// Frequencies for the telescoping and trivial-bound checks: every k with
/// |k| < exhaustive_limit plus `sampled` seeded draws with
/// exhaustive_limit <= |k| < sample_limit (both signs).
struct FrequencyPlan {
  Int exhaustive_limit = Int{1} << 20;
  Int sample_limit = Int{1} << 40;
  std::size_t sampled = 4096;
  std::uint64_t seed = 0;
};

struct InequalityWitness {
  int ell = 0;  // 0 is mu
  double max_ratio = 0.0;  // max LHS / RHS
  Int witness_k = 0;
  std::size_t checked = 0;
};

/// Consecutive-level differences:
///   |F_{j+1}(k) - F_j(k)| <= C min(1, N^{j+1}/|k|) t^(-(j+1)/2) ln(8 N^{j+1})
/// for F = mu-hat and every f_ell-hat with ell <= j. C defaults to 2 c_rot.
struct TelescopeReport {
  int j = 0;
  double constant = 0.0;
  std::vector<InequalityWitness> entries;  // one per ell = 0..j
  double max_ratio() const;
  bool holds() const { return max_ratio() <= 1.0; }
};

TelescopeReport telescope_check(const Construction& c, int j, const FrequencyPlan& plan,
                                std::optional<double> constant = std::nullopt);

/// |f_ell dmu_h-hat(k)| <= N^h t^(-ell/2) / (pi |k|) for k != 0, every ell <= h.
struct TrivialBoundReport {
  int h = 0;
  std::vector<InequalityWitness> entries;
  double max_ratio() const;
  bool holds() const { return max_ratio() <= 1.0 + 1e-12; }
};

TrivialBoundReport trivial_bound_check(const Construction& c, int h, const FrequencyPlan& plan);

/// Dyadic block [2^index, 2^(index+1)) of |k|.
struct Octave {
  int index = 0;
  Int k_lo = 0;
  Int k_hi = 0;  // exclusive
  double max_abs = 0.0;
  Int argmax_k = 0;
  double max_scaled = 0.0;  // max |coef| (1 + |k|)^(beta/2)
};

struct DecayReport {
  double beta = 0.0;
  double sup_constant = 0.0;
  std::vector<Octave> octaves;
  /// Least-squares slope of log(max |coef|) against log|argmax k| over
  /// octaves with a nonzero maximum; NaN with fewer than two.
  double fitted_exponent = 0.0;
};

/// Per-octave maxima with k = 0 excluded. Throws InvalidArgument on an
/// empty frequency set or beta <= 0.
DecayReport decay_report(const Spectrum& spectrum, double beta);

/// sum_{j >= 0} min(1, N^{j+1}/|k|) t^(-(j+1)/2) ln(8 N^{j+1}), truncated
/// once the terms are decreasing and below 1e-15.
double series_lhs(const ConstructionParams& params, Int k);

struct SeriesRow {
  Int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct SeriesBoundTable {
  double beta = 0.0;
  double constant = 0.0;  // calibrated so ratio = 1 at the smallest |k|
  std::vector<SeriesRow> rows;
  double max_ratio() const;
};

SeriesBoundTable series_bound_check(const ConstructionParams& params, double beta, std::span<const Int> ks);

}  // namespace salem
