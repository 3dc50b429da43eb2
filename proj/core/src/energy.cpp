#include "salem/energy.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "fftw_lock.hpp"
#include "salem/errors.hpp"

namespace salem {

namespace {

constexpr UWide kUWideMax = ~UWide{0};

// a * b, or nullopt on 128-bit overflow.
std::optional<UWide> mul_checked(UWide a, UWide b) {
  if (a != 0 && b > kUWideMax / a) return std::nullopt;
  return a * b;
}

std::optional<UWide> pow_checked(UWide b, long e) {
  UWide acc = 1;
  for (long i = 0; i < e; ++i) {
    auto next = mul_checked(acc, b);
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

// Direct dense step: out[i + o] += in[i] for every offset o.
std::vector<std::uint64_t> convolve_direct(const std::vector<std::uint64_t>& in, std::span<const Int> offsets,
                                           std::size_t out_len) {
  std::vector<std::uint64_t> out(out_len, 0);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == 0) continue;
    const std::uint64_t v = in[i];
    for (Int o : offsets) out[i + static_cast<std::size_t>(o)] += v;
  }
  return out;
}

// Real FFT convolution. Returns false when the rounded result cannot be
// certified: values above 2^50, a residual over 0.25, or a wrong total.
bool convolve_fft(const std::vector<std::uint64_t>& in, const std::vector<std::uint64_t>& indicator,
                  std::size_t out_len, UWide expected_total, std::vector<std::uint64_t>& out) {
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  const std::size_t nc = n / 2 + 1;
  double* a = fftw_alloc_real(n);
  double* b = fftw_alloc_real(n);
  fftw_complex* fa = fftw_alloc_complex(nc);
  fftw_complex* fb = fftw_alloc_complex(nc);
  fftw_plan pa, pb, inv;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), a, fa, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), b, fb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, a, FFTW_ESTIMATE);
  }
  std::fill(a, a + n, 0.0);
  std::fill(b, b + n, 0.0);
  for (std::size_t i = 0; i < in.size(); ++i) a[i] = static_cast<double>(in[i]);
  for (std::size_t i = 0; i < indicator.size(); ++i) b[i] = static_cast<double>(indicator[i]);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < nc; ++i) {
    const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re;
    fa[i][1] = im;
  }
  fftw_execute(inv);
  bool ok = true;
  out.assign(out_len, 0);
  UWide total = 0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len && ok; ++i) {
    const double v = a[i] * inv_n;
    const double rounded = std::nearbyint(v);
    if (std::abs(v - rounded) > 0.25 || rounded < 0 || rounded > 0x1p50) {
      ok = false;
      break;
    }
    out[i] = static_cast<std::uint64_t>(rounded);
    total += out[i];
  }
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(inv);
  }
  fftw_free(a);
  fftw_free(b);
  fftw_free(fa);
  fftw_free(fb);
  return ok && total == expected_total;
}

void finish_table(EnergyTable& table) {
  table.M = 0;
  for (const auto& [z, count] : table.g) table.M += static_cast<UWide>(count) * count;
  table.correlation.assign(static_cast<std::size_t>(table.r), 0);
  table.correlation[0] = table.M;
  for (int d = 1; d < table.r; ++d) {
    UWide acc = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < table.g.size(); ++lo) {
      const Int want = table.g[lo].first + d;
      while (hi < table.g.size() && table.g[hi].first < want) ++hi;
      if (hi == table.g.size()) break;
      if (table.g[hi].first == want) acc += static_cast<UWide>(table.g[lo].second) * table.g[hi].second;
    }
    table.correlation[static_cast<std::size_t>(d)] = acc;
  }
}

}  // namespace

UWide EnergyTable::total() const {
  UWide acc = 0;
  for (const auto& [z, count] : g) acc += count;
  return acc;
}

EnergyTable sum_distribution(std::span<const Int> Y, int r, Int dense_budget, ConvolutionMethod* method) {
  if (Y.empty()) throw InvalidArgument("sum_distribution: empty set");
  if (r < 1) throw InvalidArgument("sum_distribution: r must be >= 1");
  std::vector<Int> ys(Y.begin(), Y.end());
  std::sort(ys.begin(), ys.end());
  if (std::adjacent_find(ys.begin(), ys.end()) != ys.end()) {
    throw InvalidArgument("sum_distribution: values must be distinct");
  }
  const UWide size = ys.size();
  const auto full = pow_checked(size, 2L * r);
  const auto counts = pow_checked(size, r);
  if (!full || !counts || *counts > std::numeric_limits<std::uint64_t>::max()) {
    throw ResourceLimit("sum_distribution: |Y|^(2r) exceeds 128-bit range");
  }
  const Int lo = ys.front();
  const Wide span = static_cast<Wide>(ys.back()) - lo;
  const Wide min_sum = static_cast<Wide>(lo) * r;
  const Wide max_sum = static_cast<Wide>(ys.back()) * r;
  if (min_sum < std::numeric_limits<Int>::min() || max_sum > std::numeric_limits<Int>::max()) {
    throw ResourceLimit("sum_distribution: r * max(Y) exceeds 64-bit range");
  }
  std::vector<Int> offsets(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) offsets[i] = ys[i] - lo;

  EnergyTable table;
  table.r = r;
  table.set_size = ys.size();
  const Wide range = span * r + 1;
  ConvolutionMethod used = ConvolutionMethod::kDirect;

  if (range <= dense_budget) {
    std::vector<std::uint64_t> indicator(static_cast<std::size_t>(span) + 1, 0);
    for (Int o : offsets) indicator[static_cast<std::size_t>(o)] = 1;
    std::vector<std::uint64_t> g = indicator;
    UWide total = size;
    for (int step = 2; step <= r; ++step) {
      const std::size_t out_len = static_cast<std::size_t>(span * step + 1);
      total *= size;
      std::size_t nonzero = 0;
      for (auto v : g) nonzero += v != 0;
      // Direct costs nonzero * |Y|; FFT costs a few out_len log out_len.
      const double direct_cost = static_cast<double>(nonzero) * static_cast<double>(size);
      const double fft_cost = 6.0 * static_cast<double>(out_len) * std::log2(static_cast<double>(out_len) + 2);
      std::vector<std::uint64_t> next;
      if (direct_cost > fft_cost && convolve_fft(g, indicator, out_len, total, next)) {
        used = ConvolutionMethod::kFft;
      } else {
        next = convolve_direct(g, offsets, out_len);
      }
      g = std::move(next);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] != 0) table.g.emplace_back(min_sum + static_cast<Int>(i), g[i]);
    }
  } else {
    used = ConvolutionMethod::kSparse;
    std::map<Int, std::uint64_t> g;
    for (Int o : offsets) g[o] = 1;
    for (int step = 2; step <= r; ++step) {
      std::map<Int, std::uint64_t> next;
      for (const auto& [z, count] : g) {
        for (Int o : offsets) next[z + o] += count;
      }
      g = std::move(next);
    }
    for (const auto& [z, count] : g) table.g.emplace_back(min_sum + z, count);
  }
  finish_table(table);
  if (method) *method = used;
  return table;
}

UWide additive_energy(const Construction& c, int j, int ell, int r) {
  const auto Y = restricted_atoms(c.levels, c.params.N, j, ell);
  return sum_distribution(Y, r, c.params.fft_budget).M;
}

EnergyBound energy_lower_bound(const ConstructionParams& p, int j, int ell, int r) {
  if (ell < 0 || ell > j) throw InvalidArgument("energy_lower_bound: need 0 <= ell <= j");
  if (r < 1) throw InvalidArgument("energy_lower_bound: r must be >= 1");
  const long double lr = std::log(static_cast<long double>(r));
  const long double lt = std::log(static_cast<long double>(p.t));
  const long double lN = std::log(static_cast<long double>(p.N));
  const int free_levels = j - ell;
  EnergyBound b;
  b.bound = std::exp(-(ell + 1) * lr + (2 * r - 1) * ell * lt / 2 + free_levels * (2 * r * lt - lN));
  b.sumset_bound = std::exp(ell * (lr + lt / 2) + lr + free_levels * lN);
  const long double log_y = ell * lt / 2 + free_levels * lt;
  b.holder_floor = std::exp(2 * r * log_y - std::log(b.sumset_bound));
  return b;
}

bool energy_bound_holds(UWide M, const ConstructionParams& p, int j, int ell, int r) {
  const auto left_factor = [&]() -> std::optional<UWide> {
    auto a = pow_checked(static_cast<UWide>(r), ell + 1);
    auto b = pow_checked(static_cast<UWide>(p.N), j - ell);
    if (!a || !b) return std::nullopt;
    auto ab = mul_checked(*a, *b);
    if (!ab) return std::nullopt;
    return mul_checked(M, *ab);
  }();
  const auto right = [&]() -> std::optional<UWide> {
    auto a = pow_checked(static_cast<UWide>(p.sqrt_t), static_cast<long>(2 * r - 1) * ell);
    auto b = pow_checked(static_cast<UWide>(p.t), static_cast<long>(2 * r) * (j - ell));
    if (!a || !b) return std::nullopt;
    return mul_checked(*a, *b);
  }();
  if (left_factor && right) return *left_factor >= *right;
  return static_cast<long double>(M) >= energy_lower_bound(p, j, ell, r).bound;
}

long double cauchy_schwarz_floor(const EnergyTable& table) {
  const long double y = static_cast<long double>(table.set_size);
  return std::pow(y, 2.0L * table.r) / static_cast<long double>(table.support_size());
}

L2rNorm exact_l2r_norm(std::span<const Int> Y, Int scale, Int t, int j, int r) {
  const BsplineTable spline = bspline_integers(r);
  const EnergyTable table = sum_distribution(Y, r);
  L2rNorm out;
  out.r = r;
  out.M = table.M;
  Wide weighted = 0;
  for (int d = -(r - 1); d <= r - 1; ++d) {
    weighted += static_cast<Wide>(table.corr(d)) * spline.numerators[static_cast<std::size_t>(d + r - 1)];
  }
  out.weighted_sum = weighted;
  const long double fact = static_cast<long double>(spline.common_den);
  const long double prefactor =
      std::exp(std::log(static_cast<long double>(scale)) - 2.0L * r * j * std::log(static_cast<long double>(t)));
  out.value = prefactor * static_cast<long double>(weighted) / fact;
  out.d0_term = prefactor * static_cast<long double>(table.M) * spline.c2r().value();
  return out;
}

L2rNorm exact_l2r_norm(const Construction& c, int j, int ell, int r) {
  if (ell < 0 || ell > j) throw InvalidArgument("exact_l2r_norm: need 0 <= ell <= j");
  const auto Y = restricted_atoms(c.levels, c.params.N, j, ell);
  return exact_l2r_norm(Y, ipow(c.params.N, j), c.params.t, j, r);
}

L2rBound l2r_lower_bound(const ConstructionParams& p, int ell, int r) {
  if (ell < 0 || r < 1) throw InvalidArgument("l2r_lower_bound: need ell >= 0 and r >= 1");
  const long double c2r = bspline_integers(r).c2r().value();
  const long double lr = std::log(static_cast<long double>(r));
  const long double base = std::log(static_cast<long double>(p.N)) * ell -
                           std::log(static_cast<long double>(p.t)) * ell * (2.0L * r + 1) / 2;
  L2rBound b;
  b.value = c2r * std::exp(base - (ell + 1) * lr);
  b.proof_form = c2r * std::exp(base - ell * lr);
  const auto t0r = checked_pow(p.t0, r, std::numeric_limits<Int>::max());
  b.in_hypothesis = !t0r || *t0r > p.N0;
  return b;
}

}  // namespace salem
