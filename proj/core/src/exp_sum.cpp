#include "salem/exp_sum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "salem/errors.hpp"
#include "fftw_lock.hpp"

namespace salem {

namespace {

constexpr double kPi = std::numbers::pi;


// Residue r in [0, den) mapped to the angle -2 pi r / den, folded into
// (-pi, pi] for accuracy.
Complex phase_from_residue(Int r, Int den) {
  if (r == 0) return {1.0, 0.0};
  if (2 * static_cast<Wide>(r) == den) return {-1.0, 0.0};
  const double x = static_cast<double>(2 * static_cast<Wide>(r) > den ? r - den : r) /
                   static_cast<double>(den);
  return std::polar(1.0, -2.0 * kPi * x);
}

Complex naive_sum(std::span<const Int> atoms, Int k, Int period) {
  const Int kr = floor_mod(k, period);
  Complex s{0.0, 0.0};
  for (Int a : atoms) s += phase_from_residue(mulmod(a, kr, period), period);
  return s;
}

constexpr std::size_t kLeafSize = 32;

}  // namespace

std::mutex& detail::fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

Complex unit_phase(Int num, Int den) { return phase_from_residue(floor_mod(num, den), den); }

double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);  // exact, in [-1, 1]
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return sin_pi(x) / (kPi * x);
}

Complex box_transform(double x) {
  if (x == 0.0) return {1.0, 0.0};
  const double r = std::remainder(x, 2.0);
  return std::polar(1.0, -kPi * r) * sinc(x);
}

Complex box_transform(Int num, Int den) {
  if (num == 0) return {1.0, 0.0};
  const Int two_den = 2 * den;
  const Int r = floor_mod(num, two_den);  // x = num/den, reduced mod 2
  if (r == 0 || r == den) return {0.0, 0.0};
  const double rd = static_cast<double>(r > den ? r - two_den : r) / static_cast<double>(den);
  const double s = std::sin(kPi * rd);
  const double x = static_cast<double>(num) / static_cast<double>(den);
  return std::polar(1.0, -kPi * rd) * (s / (kPi * x));
}

std::vector<Complex> exp_sum_all(std::span<const Int> atoms, Int period, Int budget) {
  if (period < 1) throw InvalidArgument("period must be positive");
  if (period > budget) {
    throw ResourceLimit("FFT length " + std::to_string(period) + " exceeds budget " +
                        std::to_string(budget));
  }
  std::vector<Complex> table(static_cast<std::size_t>(period), Complex{0.0, 0.0});
  for (Int a : atoms) {
    if (a < 0 || a >= period) throw InvalidArgument("atom outside [0, period)");
    table[static_cast<std::size_t>(a)] += 1.0;
  }
  if (period == 1) return table;
  auto* data = reinterpret_cast<fftw_complex*>(table.data());
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(period), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return table;
}

RootTable::RootTable(Int period) : period_(period), w_(static_cast<std::size_t>(period)) {
  for (Int m = 0; m < period; ++m) w_[static_cast<std::size_t>(m)] = phase_from_residue(m, period);
}

// Atoms sharing a parent (atom / radix) contribute parent-phase times a
// digit-block sum. Parents are grouped by identical digit blocks so each
// distinct block is summed once per frequency.
namespace detail {

struct BlockTree {
  Int period = 1;
  std::vector<Int> leaf;  // non-empty for leaves
  struct Group {
    std::vector<Int> digits;
    std::unique_ptr<BlockTree> parents;
  };
  std::vector<Group> groups;

  static std::unique_ptr<BlockTree> build(std::vector<Int> atoms, Int period, Int radix) {
    auto node = std::make_unique<BlockTree>();
    node->period = period;
    if (atoms.size() <= kLeafSize || radix < 2 || period % radix != 0 || period == radix) {
      node->leaf = std::move(atoms);
      return node;
    }
    std::sort(atoms.begin(), atoms.end());
    std::map<std::vector<Int>, std::vector<Int>> by_block;
    for (std::size_t i = 0; i < atoms.size();) {
      const Int parent = atoms[i] / radix;
      std::vector<Int> digits;
      while (i < atoms.size() && atoms[i] / radix == parent) digits.push_back(atoms[i++] % radix);
      by_block[std::move(digits)].push_back(parent);
    }
    for (auto& [digits, parents] : by_block) {
      node->groups.push_back({digits, build(std::move(parents), period / radix, radix)});
    }
    return node;
  }

  Complex eval(Int k) const {
    if (groups.empty()) return naive_sum(leaf, k, period);
    const Int kr = floor_mod(k, period);
    Complex s{0.0, 0.0};
    for (const auto& g : groups) {
      Complex block{0.0, 0.0};
      for (Int d : g.digits) block += phase_from_residue(mulmod(d, kr, period), period);
      s += block * g.parents->eval(k);
    }
    return s;
  }
};

}  // namespace detail

using detail::BlockTree;

ExpSumEvaluator::ExpSumEvaluator(std::vector<Int> atoms, Int period, Int fft_budget, Int radix)
    : atoms_(std::move(atoms)), period_(period), method_(ExpSumMethod::kNaive) {
  if (period_ < 1) throw InvalidArgument("period must be positive");
  for (Int a : atoms_) {
    if (a < 0 || a >= period_) throw InvalidArgument("atom outside [0, period)");
  }
  if (atoms_.empty()) return;
  if (period_ <= fft_budget) {
    table_ = exp_sum_all(atoms_, period_, fft_budget);
    method_ = ExpSumMethod::kFft;
  } else if (radix > 1) {
    tree_ = BlockTree::build(atoms_, period_, radix);
    method_ = ExpSumMethod::kBlocked;
  }
}

ExpSumEvaluator::~ExpSumEvaluator() = default;
ExpSumEvaluator::ExpSumEvaluator(ExpSumEvaluator&&) noexcept = default;
ExpSumEvaluator& ExpSumEvaluator::operator=(ExpSumEvaluator&&) noexcept = default;

Complex ExpSumEvaluator::operator()(Int k) const {
  if (atoms_.empty()) return {0.0, 0.0};
  if (!table_.empty()) return table_[static_cast<std::size_t>(floor_mod(k, period_))];
  if (tree_) return tree_->eval(k);
  return naive_sum(atoms_, k, period_);
}

Complex exp_sum(std::span<const Int> atoms, Int k, Int period, ExpSumMethod method, Int radix) {
  if (period < 1) throw InvalidArgument("period must be positive");
  switch (method) {
    case ExpSumMethod::kFft: {
      const auto table = exp_sum_all(atoms, period);
      return table[static_cast<std::size_t>(floor_mod(k, period))];
    }
    case ExpSumMethod::kBlocked: {
      if (radix < 2) return naive_sum(atoms, k, period);
      for (Int a : atoms) {
        if (a < 0 || a >= period) throw InvalidArgument("atom outside [0, period)");
      }
      auto tree = BlockTree::build(std::vector<Int>(atoms.begin(), atoms.end()), period, radix);
      return tree->eval(k);
    }
    case ExpSumMethod::kNaive:
      break;
  }
  for (Int a : atoms) {
    if (a < 0 || a >= period) throw InvalidArgument("atom outside [0, period)");
  }
  return naive_sum(atoms, k, period);
}

}  // namespace salem
