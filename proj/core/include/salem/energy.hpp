#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "salem/bspline.hpp"
#include "salem/construction.hpp"

namespace salem {

/// r-fold sum distribution g(z) = #{(y_1..y_r) in Y^r : sum y_i = z}.
struct EnergyTable {
  int r = 0;
  std::size_t set_size = 0;                          // |Y|
  std::vector<std::pair<Int, std::uint64_t>> g;      // (z, g(z)) with g(z) > 0, z increasing
  UWide M = 0;                                       // sum g(z)^2
  std::vector<UWide> correlation;                    // corr(d) for d = 0..r-1

  std::size_t support_size() const { return g.size(); }
  UWide corr(int d) const { return correlation[static_cast<std::size_t>(d < 0 ? -d : d)]; }
  /// sum g(z), which equals |Y|^r.
  UWide total() const;
};

/// Which convolution route sum_distribution took.
enum class ConvolutionMethod { kDirect, kFft, kSparse };

/// Exact r-fold distribution. Dense iterated convolution when the range
/// r (max Y - min Y) + 1 fits `dense_budget`, FFT-accelerated when the
/// rounded result can be certified exact; a sorted sparse table otherwise.
/// Throws InvalidArgument on empty Y, repeated values or r < 1, and
/// ResourceLimit when |Y|^(2r) leaves 128-bit range.
EnergyTable sum_distribution(std::span<const Int> Y, int r, Int dense_budget = Int{1} << 26,
                             ConvolutionMethod* method = nullptr);

/// M_Y for Y = N^j (F_ell cap A_j).
UWide additive_energy(const Construction& c, int j, int ell, int r);

/// Right-hand side of the energy lower bound together with the support
/// bound and the Cauchy-Schwarz floor it is derived from.
struct EnergyBound {
  long double bound = 0;         // r^(-ell-1) t^((2r-1) ell/2) (t^(2r)/N)^(j-ell)
  long double sumset_bound = 0;  // (r sqrt t)^ell r N^(j-ell), bounds |support g|
  long double holder_floor = 0;  // |Y|^(2r) / sumset_bound
};

/// Throws InvalidArgument when ell > j or r < 1.
EnergyBound energy_lower_bound(const ConstructionParams& params, int j, int ell, int r);

/// M >= bound, decided in exact integer arithmetic:
///   M r^(ell+1) N^(j-ell) >= sqrt_t^((2r-1) ell) t^(2r (j-ell)).
/// Falls back to long double when a side leaves 128-bit range.
bool energy_bound_holds(UWide M, const ConstructionParams& params, int j, int ell, int r);

/// |Y|^(2r) / |support g|; never exceeds M.
long double cauchy_schwarz_floor(const EnergyTable& table);

/// ||f_ell dmu_j-hat||_{2r}^{2r} via integer correlations and B-spline values.
struct L2rNorm {
  int r = 0;
  long double value = 0;     // (N^j / t^(2rj)) sum_{|d|<r} corr(d) B_2r(d)
  long double d0_term = 0;   // (N^j / t^(2rj)) C_2r M
  Wide weighted_sum = 0;     // sum_{|d|<r} corr(d) B_2r(d) (2r-1)!
  UWide M = 0;
};

L2rNorm exact_l2r_norm(std::span<const Int> Y, Int scale, Int t, int j, int r);
L2rNorm exact_l2r_norm(const Construction& c, int j, int ell, int r);

struct L2rBound {
  long double value = 0;        // C_2r N^ell r^(-ell-1) t^(-ell(2r+1)/2)
  long double proof_form = 0;   // same with r^(-ell)
  bool in_hypothesis = false;   // r > 1/alpha, i.e. t0^r > N0
};

L2rBound l2r_lower_bound(const ConstructionParams& params, int ell, int r);

}  // namespace salem
