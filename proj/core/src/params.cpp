#include "salem/params.hpp"

#include <cmath>
#include <string>

#include "salem/errors.hpp"

namespace salem {

std::optional<Int> checked_pow(Int base, int exp, Int limit) {
  if (exp < 0 || base < 0) return std::nullopt;
  Wide acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<Int>(acc);
}

Int ipow(Int base, int exp) {
  auto v = checked_pow(base, exp);
  if (!v) {
    throw ResourceLimit(std::to_string(base) + "^" + std::to_string(exp) +
                        " exceeds the exact-integer range (2^62)");
  }
  return *v;
}

double log8_pow(Int N, int e) {
  return std::log(8.0) + e * std::log(static_cast<double>(N));
}

void validate_params(const ConstructionParams& p) {
  if (p.n0 < 1) throw InvalidArgument("n0 must be >= 1");
  if (!(p.t0 > 1 && p.t0 < p.N0)) {
    throw InvalidArgument("need 1 < t0 < N0, got t0=" + std::to_string(p.t0) +
                          " N0=" + std::to_string(p.N0));
  }
  if (p.j_max < 0) throw InvalidArgument("j_max must be >= 0");
  if (!checked_pow(p.N, p.j_max + 1)) {
    throw ResourceLimit("N^(j_max+1) = " + std::to_string(p.N) + "^" + std::to_string(p.j_max + 1) +
                        " exceeds the exact-integer range");
  }
  if (p.sqrt_t >= p.N) throw InvalidArgument("progression length sqrt(t) >= N");
  if (p.ap_offset < 0) throw InvalidArgument("ap_offset must be >= 0");
  if (p.ap_gap < 1) throw InvalidArgument("ap_gap must be >= 1");
  const Wide last = static_cast<Wide>(p.ap_offset) + static_cast<Wide>(p.sqrt_t - 1) * p.ap_gap;
  if (last > p.N - 1) {
    throw InvalidArgument("progression exits [0, N): offset " + std::to_string(p.ap_offset) +
                          " + (sqrt(t)-1) * gap " + std::to_string(p.ap_gap) + " > N-1 = " +
                          std::to_string(p.N - 1));
  }
  if (!(p.c_eta > 0.0) || !(p.c_rot > 0.0)) throw InvalidArgument("c_eta and c_rot must be positive");
  if (p.k_budget < 1) throw InvalidArgument("k_budget must be >= 1");
  if (p.max_retries < 1) throw InvalidArgument("max_retries must be >= 1");
  if (p.fft_budget < 1) throw InvalidArgument("fft_budget must be >= 1");
}

ConstructionParams derive_params(Int N0, Int t0, int n0, const ParamOverrides& o) {
  if (n0 < 1) throw InvalidArgument("n0 must be >= 1");
  if (!(t0 > 1 && t0 < N0)) {
    throw InvalidArgument("need 1 < t0 < N0, got t0=" + std::to_string(t0) +
                          " N0=" + std::to_string(N0));
  }
  ConstructionParams p;
  p.N0 = N0;
  p.t0 = t0;
  p.n0 = n0;
  p.N = ipow(N0, 2 * n0);
  p.t = ipow(t0, 2 * n0);
  p.sqrt_t = ipow(t0, n0);
  p.alpha = LogRatio{t0, N0, std::log(static_cast<double>(t0)) / std::log(static_cast<double>(N0))};

  p.j_max = o.j_max.value_or(p.j_max);
  p.seed = o.seed.value_or(p.seed);
  p.c_eta = o.c_eta.value_or(p.c_eta);
  p.c_rot = o.c_rot.value_or(p.c_rot);
  p.k_budget = o.k_budget.value_or(p.k_budget);
  p.max_retries = o.max_retries.value_or(p.max_retries);
  p.fft_budget = o.fft_budget.value_or(p.fft_budget);
  p.ap_offset = o.ap_offset.value_or(0);
  if (o.ap_gap) {
    p.ap_gap = *o.ap_gap;
  } else {
    p.ap_gap = p.sqrt_t > 1 ? (p.N - 1) / (p.sqrt_t - 1) : 1;
  }
  validate_params(p);
  return p;
}

std::vector<Int> make_progression(const ConstructionParams& p) {
  const Wide last = static_cast<Wide>(p.ap_offset) + static_cast<Wide>(p.sqrt_t - 1) * p.ap_gap;
  if (p.ap_offset < 0 || p.ap_gap < 1 || last > p.N - 1) {
    throw InvalidArgument("progression exits [0, N)");
  }
  std::vector<Int> out(static_cast<std::size_t>(p.sqrt_t));
  for (Int i = 0; i < p.sqrt_t; ++i) out[static_cast<std::size_t>(i)] = p.ap_offset + i * p.ap_gap;
  return out;
}

double eta(const ConstructionParams& p, int j) {
  return std::sqrt(p.c_eta / static_cast<double>(p.t) * log8_pow(p.N, j + 2));
}

double lambda(const ConstructionParams& p, int j) {
  return p.c_rot * std::pow(static_cast<double>(p.t), -(j + 1) / 2.0) * log8_pow(p.N, j + 1);
}

double lambda(const ConstructionParams& p, int j, int ell) {
  return p.c_rot * std::pow(static_cast<double>(p.t), -(j + 1) / 2.0 + ell / 4.0) *
         log8_pow(p.N, j + 1);
}

}  // namespace salem
