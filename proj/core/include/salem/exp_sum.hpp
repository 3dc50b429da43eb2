#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "salem/params.hpp"

namespace salem {

using Complex = std::complex<double>;

namespace detail {
struct BlockTree;
}

enum class ExpSumMethod { kNaive, kFft, kBlocked };

/// e^(-2 pi i num / den), with the residue reduced exactly in integers.
Complex unit_phase(Int num, Int den);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// sinc(x) = sin(pi x) / (pi x), sinc(0) = 1.
double sinc(double x);

/// Fourier transform of the indicator of [0, 1] at x:
/// (1 - e^(-2 pi i x)) / (2 pi i x) = e^(-pi i x) sinc(x); 1 at x = 0.
Complex box_transform(double x);

/// Same at the rational point x = num / den, reduced exactly.
Complex box_transform(Int num, Int den);

/// S(k) = sum over atoms of e^(-2 pi i atom k / period).
/// kFft transforms the full dense indicator and picks entry k mod period;
/// kBlocked uses the radix-`period`-digit structure when the period is a
/// power of `radix` (pass radix = 0 to fall back to kNaive).
Complex exp_sum(std::span<const Int> atoms, Int k, Int period,
                ExpSumMethod method = ExpSumMethod::kNaive, Int radix = 0);

/// All S(k), k in [0, period), by one dense FFT of the indicator.
/// Throws ResourceLimit if period > budget.
std::vector<Complex> exp_sum_all(std::span<const Int> atoms, Int period,
                                 Int budget = Int{1} << 26);

/// e^(-2 pi i m / P) for m in [0, P).
class RootTable {
 public:
  explicit RootTable(Int period);
  Int period() const { return period_; }
  const Complex& operator[](Int residue) const { return w_[static_cast<std::size_t>(residue)]; }
  Complex at(Int k) const { return w_[static_cast<std::size_t>(floor_mod(k, period_))]; }

 private:
  Int period_;
  std::vector<Complex> w_;
};

/// Evaluates S(k) for arbitrary integer k. Tabulates by FFT when the
/// period fits the budget; otherwise evaluates on demand through the
/// digit-block tree (radix > 1) or naively.
class ExpSumEvaluator {
 public:
  ExpSumEvaluator(std::vector<Int> atoms, Int period, Int fft_budget = Int{1} << 26, Int radix = 0);
  ~ExpSumEvaluator();
  ExpSumEvaluator(ExpSumEvaluator&&) noexcept;
  ExpSumEvaluator& operator=(ExpSumEvaluator&&) noexcept;

  Complex operator()(Int k) const;
  Int period() const { return period_; }
  std::size_t atom_count() const { return atoms_.size(); }
  bool tabulated() const { return !table_.empty() || atoms_.empty(); }
  ExpSumMethod method() const { return method_; }
  /// Tabulated values over [0, period); empty when not tabulated.
  const std::vector<Complex>& table() const { return table_; }

 private:
  std::vector<Int> atoms_;
  Int period_;
  ExpSumMethod method_;
  std::vector<Complex> table_;
  std::unique_ptr<detail::BlockTree> tree_;
};

}  // namespace salem
