#include "salem/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "salem/errors.hpp"
#include "salem/parallel.hpp"

namespace salem {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Int> sample_frequencies(const FrequencyPlan& plan) {
  std::vector<Int> out;
  if (plan.sample_limit <= plan.exhaustive_limit) return out;
  Rng rng(plan.seed);
  const auto span = static_cast<std::uint64_t>(plan.sample_limit - plan.exhaustive_limit);
  for (std::size_t i = 0; i < plan.sampled; ++i) {
    const Int mag = plan.exhaustive_limit + static_cast<Int>(rng.below(span));
    out.push_back(rng.below(2) ? mag : -mag);
  }
  return out;
}

// All k with |k| < limit, followed by the sampled list.
class PlannedFrequencies {
 public:
  explicit PlannedFrequencies(const FrequencyPlan& plan)
      : limit_(plan.exhaustive_limit), sampled_(sample_frequencies(plan)) {}
  std::size_t size() const { return dense() + sampled_.size(); }
  Int operator[](std::size_t i) const {
    return i < dense() ? static_cast<Int>(i) - (limit_ - 1) : sampled_[i - dense()];
  }

 private:
  std::size_t dense() const { return limit_ > 0 ? static_cast<std::size_t>(2 * limit_ - 1) : 0; }
  Int limit_;
  std::vector<Int> sampled_;
};

InequalityWitness merge(const InequalityWitness& a, const InequalityWitness& b) {
  InequalityWitness out = b.max_ratio > a.max_ratio ? b : a;
  out.checked = a.checked + b.checked;
  return out;
}

}  // namespace

LevelTransform::LevelTransform(const Construction& c, int j, Weight weight, Int q)
    : j_(j),
      weight_(weight),
      q_(q),
      scale_(ipow(c.params.N, j)),
      inv_tj_(std::pow(static_cast<double>(c.params.t), -j)),
      sums_(restricted_atoms(c.levels, c.params.N, j, weight.ell), ipow(c.params.N, j) * q,
            c.params.fft_budget, c.params.N) {
  if (q < 1) throw InvalidArgument("lattice refinement q must be >= 1");
  if (weight.ell < 0 || weight.ell > j) throw InvalidArgument("weight f_l needs 0 <= l <= j");
}

Complex LevelTransform::at_lattice(Int m) const {
  return box_transform(m, q_ * scale_) * (inv_tj_ * sums_(m));
}

Complex mu_hat(const Construction& c, int j, Int k) { return f_mu_hat(c, j, 0, k); }

Complex f_mu_hat(const Construction& c, int j, int ell, Int k) {
  if (ell < 0 || ell > j) throw InvalidArgument("f_mu_hat needs 0 <= l <= j");
  const Int scale = ipow(c.params.N, j);
  const auto atoms = restricted_atoms(c.levels, c.params.N, j, ell);
  const Complex s = exp_sum(atoms, k, scale);
  return box_transform(k, scale) * (std::pow(static_cast<double>(c.params.t), -j) * s);
}

Complex f_mu_hat_real(const Construction& c, int j, int ell, double xi) {
  if (ell < 0 || ell > j) throw InvalidArgument("f_mu_hat_real needs 0 <= l <= j");
  const Int scale = ipow(c.params.N, j);
  const auto atoms = restricted_atoms(c.levels, c.params.N, j, ell);
  const long double x = static_cast<long double>(xi) / static_cast<long double>(scale);
  Complex s{0.0, 0.0};
  for (Int a : atoms) {
    const long double frac = std::remainder(static_cast<long double>(a) * x, 1.0L);
    s += std::polar(1.0, static_cast<double>(-2.0L * std::numbers::pi_v<long double> * frac));
  }
  return box_transform(static_cast<double>(x)) * (std::pow(static_cast<double>(c.params.t), -j) * s);
}

Spectrum compute_spectrum(const Construction& c, int j, Weight weight, std::vector<Int> frequencies) {
  const LevelTransform tr(c, j, weight);
  Spectrum sp;
  sp.j = j;
  sp.weight = weight;
  sp.coefficients.resize(frequencies.size());
  for_each_chunk(frequencies.size(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) sp.coefficients[i] = tr.at_integer(frequencies[i]);
  });
  sp.frequencies = std::move(frequencies);
  return sp;
}

ParsevalResult parseval_check(std::span<const Int> atoms, Int period, Int fft_budget) {
  const auto table = exp_sum_all(atoms, period, fft_budget);
  CompensatedSum sum;
  for (const auto& s : table) sum.add(std::norm(s));
  ParsevalResult r;
  r.lhs = sum.value();
  r.rhs = static_cast<double>(period) * static_cast<double>(atoms.size());
  r.relative_error = r.rhs > 0 ? std::abs(r.lhs - r.rhs) / r.rhs : std::abs(r.lhs);
  return r;
}

double TelescopeReport::max_ratio() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_ratio);
  return m;
}

TelescopeReport telescope_check(const Construction& c, int j, const FrequencyPlan& plan,
                                std::optional<double> constant) {
  if (j < 0 || j + 1 > c.params.j_max || static_cast<std::size_t>(j + 1) >= c.levels.size()) {
    throw InvalidArgument("telescope_check needs levels j and j+1");
  }
  const auto& p = c.params;
  TelescopeReport rep;
  rep.j = j;
  rep.constant = constant.value_or(2.0 * p.c_rot);
  const Int Pj = ipow(p.N, j);
  const Int Pj1 = ipow(p.N, j + 1);
  const double decay = std::pow(static_cast<double>(p.t), -(j + 1) / 2.0) * log8_pow(p.N, j + 1);

  std::vector<LevelTransform> lo, hi;
  for (int ell = 0; ell <= j; ++ell) {
    lo.emplace_back(c, j, Weight::f(ell));
    hi.emplace_back(c, j + 1, Weight::f(ell));
  }
  const PlannedFrequencies ks(plan);
  const std::size_t weights = static_cast<std::size_t>(j + 1);
  using Acc = std::vector<InequalityWitness>;
  Acc init(weights);
  for (std::size_t w = 0; w < weights; ++w) init[w].ell = static_cast<int>(w);

  rep.entries = chunked_reduce(
      ks.size(), init,
      [&](std::size_t b, std::size_t e) {
        Acc local = init;
        for (std::size_t i = b; i < e; ++i) {
          const Int k = ks[i];
          const Complex pre_lo = box_transform(k, Pj);
          const Complex pre_hi = box_transform(k, Pj1);
          const double absk = std::abs(static_cast<double>(k));
          const double rhs = rep.constant * std::min(1.0, static_cast<double>(Pj1) / absk) * decay;
          for (std::size_t w = 0; w < weights; ++w) {
            const Complex a = pre_hi * (hi[w].inv_tj() * hi[w].sum_at_lattice(k));
            const Complex b0 = pre_lo * (lo[w].inv_tj() * lo[w].sum_at_lattice(k));
            const double ratio = std::abs(a - b0) / rhs;
            ++local[w].checked;
            if (ratio > local[w].max_ratio) {
              local[w].max_ratio = ratio;
              local[w].witness_k = k;
            }
          }
        }
        return local;
      },
      [&](const Acc& a, const Acc& b) {
        Acc out(weights);
        for (std::size_t w = 0; w < weights; ++w) out[w] = merge(a[w], b[w]);
        return out;
      });
  return rep;
}

double TrivialBoundReport::max_ratio() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_ratio);
  return m;
}

TrivialBoundReport trivial_bound_check(const Construction& c, int h, const FrequencyPlan& plan) {
  const auto& p = c.params;
  TrivialBoundReport rep;
  rep.h = h;
  const Int Ph = ipow(p.N, h);
  std::vector<LevelTransform> tr;
  for (int ell = 0; ell <= h; ++ell) tr.emplace_back(c, h, Weight::f(ell));
  const PlannedFrequencies ks(plan);
  const std::size_t weights = tr.size();
  using Acc = std::vector<InequalityWitness>;
  Acc init(weights);
  for (std::size_t w = 0; w < weights; ++w) init[w].ell = static_cast<int>(w);
  rep.entries = chunked_reduce(
      ks.size(), init,
      [&](std::size_t b, std::size_t e) {
        Acc local = init;
        for (std::size_t i = b; i < e; ++i) {
          const Int k = ks[i];
          if (k == 0) continue;
          const Complex pre = box_transform(k, Ph);
          const double base = static_cast<double>(Ph) / (kPi * std::abs(static_cast<double>(k)));
          for (std::size_t w = 0; w < weights; ++w) {
            const double lhs = std::abs(pre * (tr[w].inv_tj() * tr[w].sum_at_lattice(k)));
            const double rhs = base * std::pow(static_cast<double>(p.t), -static_cast<double>(w) / 2.0);
            const double ratio = lhs / rhs;
            ++local[w].checked;
            if (ratio > local[w].max_ratio) {
              local[w].max_ratio = ratio;
              local[w].witness_k = k;
            }
          }
        }
        return local;
      },
      [&](const Acc& a, const Acc& b) {
        Acc out(weights);
        for (std::size_t w = 0; w < weights; ++w) out[w] = merge(a[w], b[w]);
        return out;
      });
  return rep;
}

DecayReport decay_report(const Spectrum& spectrum, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("decay_report needs beta > 0");
  DecayReport rep;
  rep.beta = beta;
  std::map<int, Octave> octaves;
  bool any = false;
  for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
    const Int k = spectrum.frequencies[i];
    if (k == 0) continue;
    any = true;
    const auto mag = static_cast<std::uint64_t>(k < 0 ? -k : k);
    const int index = std::bit_width(mag) - 1;
    auto [it, inserted] = octaves.try_emplace(index);
    Octave& o = it->second;
    if (inserted) {
      o.index = index;
      o.k_lo = Int{1} << index;
      o.k_hi = Int{1} << (index + 1);
    }
    const double a = std::abs(spectrum.coefficients[i]);
    const double scaled = a * std::pow(1.0 + static_cast<double>(mag), beta / 2.0);
    if (a > o.max_abs) {
      o.max_abs = a;
      o.argmax_k = k;
    }
    o.max_scaled = std::max(o.max_scaled, scaled);
    rep.sup_constant = std::max(rep.sup_constant, scaled);
  }
  if (!any) throw InvalidArgument("decay_report: no nonzero frequencies");
  std::vector<double> xs, ys;
  for (auto& [idx, o] : octaves) {
    rep.octaves.push_back(o);
    if (o.max_abs > 0.0) {
      xs.push_back(std::log(std::abs(static_cast<double>(o.argmax_k))));
      ys.push_back(std::log(o.max_abs));
    }
  }
  if (xs.size() < 2) {
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.fitted_exponent = sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

double series_lhs(const ConstructionParams& p, Int k) {
  if (k == 0) throw InvalidArgument("series_lhs needs k != 0");
  if (p.t <= 1 || p.N <= 1) throw InvalidArgument("series diverges for t <= 1");
  const long double absk = std::abs(static_cast<long double>(k));
  const long double logN = std::log(static_cast<long double>(p.N));
  const long double logt = std::log(static_cast<long double>(p.t));
  long double sum = 0.0L;
  for (int j = 0; j < 100000; ++j) {
    const long double e = j + 1;
    const long double log_scale = e * logN;  // ln N^{j+1}
    const long double damp = std::min(0.0L, log_scale - std::log(absk));
    const long double term = std::exp(damp - e * logt / 2.0L) * (std::log(8.0L) + log_scale);
    sum += term;
    if (damp == 0.0L && term < 1e-15L) break;
  }
  return static_cast<double>(sum);
}

double SeriesBoundTable::max_ratio() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.ratio);
  return m;
}

SeriesBoundTable series_bound_check(const ConstructionParams& p, double beta, std::span<const Int> ks) {
  if (ks.empty()) throw InvalidArgument("series_bound_check needs frequencies");
  SeriesBoundTable table;
  table.beta = beta;
  Int kmin = 0;
  for (Int k : ks) {
    if (k == 0) throw InvalidArgument("series_bound_check needs k != 0");
    if (kmin == 0 || std::abs(k) < std::abs(kmin)) kmin = k;
  }
  const double absmin = std::abs(static_cast<double>(kmin));
  table.constant = series_lhs(p, kmin) * std::pow(absmin, beta / 2.0);
  for (Int k : ks) {
    SeriesRow row;
    row.k = k;
    row.lhs = series_lhs(p, k);
    row.rhs = table.constant * std::pow(std::abs(static_cast<double>(k)), -beta / 2.0);
    row.ratio = row.lhs / row.rhs;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace salem
