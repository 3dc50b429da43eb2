#include "salem/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "salem/energy.hpp"
#include "salem/errors.hpp"
#include "salem/parallel.hpp"
#include "salem/spectral.hpp"

namespace salem {

namespace {

constexpr double kPi = std::numbers::pi;

struct GridSum {
  CompensatedSum sum;
  double sup_p = 0.0;  // max |phi|^p
};

// x^p with an exact product chain for small integer p.
double power(double x, double p, int ip) {
  if (ip == 2) return x * x;
  if (ip == 3) return x * x * x;
  if (ip == 4) {
    const double y = x * x;
    return y * y;
  }
  return std::pow(x, p);
}

// Trapezoid sum of |phi(m/q)|^p over m in [-Kq, Kq], using |phi(-x)| = |phi(x)|.
// With D = q N^j both |S| and |sin(pi m / D)| have period D in m, so
//   |phi(m/q)|^p = w[m mod D] (D / (pi m))^p,  w = |sin|^p |t^-j S|^p.
GridSum trapezoid(const LevelTransform& tr, double p, Int Kq) {
  const Int D = tr.q() * tr.scale();
  const int ip = (p == std::floor(p) && p <= 4.0) ? static_cast<int>(p) : 0;
  std::vector<double> w(static_cast<std::size_t>(D));
  for_each_chunk(w.size(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      const double s = std::abs(std::sin(kPi * static_cast<double>(i) / static_cast<double>(D)));
      w[i] = power(s * std::abs(tr.sum_at_lattice(static_cast<Int>(i))) * tr.inv_tj(), p, ip);
    }
  });
  const double at_zero = power(std::abs(tr.sum_at_lattice(0)) * tr.inv_tj(), p, ip);
  const double scale = static_cast<double>(D) / kPi;
  const std::size_t n = static_cast<std::size_t>(Kq) + 1;
  auto chunk = [&](std::size_t b, std::size_t e) {
    GridSum g;
    std::size_t rho = b % w.size();
    for (std::size_t i = b; i < e; ++i, ++rho) {
      if (rho == w.size()) rho = 0;
      const Int m = static_cast<Int>(i);
      const double v = m == 0 ? at_zero : w[rho] * power(scale / static_cast<double>(m), p, ip);
      g.sup_p = std::max(g.sup_p, v);
      g.sum.add((m == 0 || m == Kq) ? v : 2.0 * v);
    }
    return g;
  };
  auto combine = [](GridSum a, const GridSum& b) {
    a.sum.add(b.sum);
    a.sup_p = std::max(a.sup_p, b.sup_p);
    return a;
  };
  return chunked_reduce(n, GridSum{}, chunk, combine);
}

// Mean of |t^-j S(m)|^p over one lattice period.
double periodic_mean(const LevelTransform& tr, double p) {
  const Int period = tr.q() * tr.scale();
  auto chunk = [&](std::size_t b, std::size_t e) {
    CompensatedSum s;
    for (std::size_t i = b; i < e; ++i) {
      s.add(std::pow(std::abs(tr.sum_at_lattice(static_cast<Int>(i))) * tr.inv_tj(), p));
    }
    return s;
  };
  auto combine = [](CompensatedSum a, const CompensatedSum& b) {
    a.add(b);
    return a;
  };
  return chunked_reduce(static_cast<std::size_t>(period), CompensatedSum{}, chunk, combine).value() /
         static_cast<double>(period);
}

double ipow_double(Int base, double e) { return std::pow(static_cast<double>(base), e); }

}  // namespace

std::string_view to_string(NormMethod m) {
  switch (m) {
    case NormMethod::kExactBspline: return "exact-bspline";
    case NormMethod::kQuadrature: return "quadrature";
    case NormMethod::kLowerBound: return "lower-bound";
    case NormMethod::kClosedForm: return "closed-form";
  }
  return "unknown";
}

NormEstimate lp_norm_quadrature(const Construction& c, int j, int ell, double p, const QuadratureOptions& opts) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm_quadrature: p must be >= 1");
  if (ell < 0 || ell > j) throw InvalidArgument("lp_norm_quadrature: need 0 <= ell <= j");
  if (opts.q < 4) throw InvalidArgument("lp_norm_quadrature: step must be at most 1/4");
  const Int scale = ipow(c.params.N, j);
  const Int K = opts.K == 0 ? 32 * scale : opts.K;
  if (K <= 0 || K % scale != 0) throw InvalidArgument("lp_norm_quadrature: K must be a positive multiple of N^j");

  NormEstimate est;
  est.p = p;
  est.method = NormMethod::kQuadrature;
  est.K = static_cast<double>(K);
  est.h = 1.0 / static_cast<double>(opts.q);

  const LevelTransform coarse(c, j, Weight::f(ell), opts.q);
  const GridSum g = trapezoid(coarse, p, K * opts.q);
  est.value = g.sum.value() * est.h;
  est.sup_on_grid = std::pow(g.sup_p, 1.0 / p);

  const LevelTransform fine(c, j, Weight::f(ell), 2 * opts.q);
  est.refined_value = trapezoid(fine, p, K * 2 * opts.q).sum.value() * est.h / 2;
  est.refinement_delta = std::abs(est.refined_value - est.value) / std::max(est.refined_value, 1e-300);

  const double envelope = static_cast<double>(scale) * ipow_double(c.params.t, -ell / 2.0) / kPi;
  if (p > 1.0) {
    est.tail_bound = 2.0 * std::pow(envelope, p) * std::pow(static_cast<double>(K), 1.0 - p) / (p - 1.0);
    // int_U^inf |sin(pi u)|^p/(pi u)^p du ~ mean|sin|^p U^(1-p) / (pi^p (p-1)).
    const double mean_sin = std::tgamma((p + 1) / 2) / (std::sqrt(kPi) * std::tgamma(p / 2 + 1));
    const double U = static_cast<double>(K) / static_cast<double>(scale);
    est.tail_estimate = 2.0 * static_cast<double>(scale) * periodic_mean(coarse, p) * mean_sin *
                        std::pow(U, 1.0 - p) / (std::pow(kPi, p) * (p - 1.0));
  } else {
    est.tail_bound = std::numeric_limits<double>::infinity();
    est.tail_estimate = std::numeric_limits<double>::infinity();
  }
  if (est.refinement_delta > opts.self_check_tolerance) {
    throw VerificationFailure("lp_norm_quadrature: grid self-check failed (relative change " +
                              std::to_string(est.refinement_delta) + " at h/2)");
  }
  return est;
}

double grid_sup(const Construction& c, int j, int ell, Int q) {
  const LevelTransform tr(c, j, Weight::f(ell), q);
  const std::size_t D = static_cast<std::size_t>(tr.q() * tr.scale());
  return chunked_reduce(
      D, 0.0,
      [&](std::size_t b, std::size_t e) {
        double best = 0.0;
        for (std::size_t i = b; i < e; ++i) best = std::max(best, std::abs(tr.at_lattice(static_cast<Int>(i))));
        return best;
      },
      [](double a, double b) { return std::max(a, b); });
}

bool LqMass::exact() const {
  return std::all_of(levels.begin(), levels.end(), [](const Level& l) { return l.count == l.expected; });
}

LqMass lq_mass(const Construction& c, int ell, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("lq_mass: q must be >= 1");
  const int j_max = static_cast<int>(c.levels.size()) - 1;
  if (ell < 0 || ell > j_max) throw InvalidArgument("lq_mass: need 0 <= ell <= j_max");
  const auto& p = c.params;
  LqMass out;
  out.ell = ell;
  out.q = q;
  out.mass = ipow_double(p.t, -ell / 2.0);
  out.norm = ipow_double(p.t, -ell / (2.0 * q));
  for (int j = ell; j <= j_max; ++j) {
    LqMass::Level lv;
    lv.j = j;
    lv.count = static_cast<Int>(restricted_atoms(c.levels, p.N, j, ell).size());
    lv.expected = ipow(p.sqrt_t, ell) * ipow(p.t, j - ell);
    lv.direct_mass = static_cast<double>(lv.count) * ipow_double(p.t, -j);
    out.levels.push_back(lv);
  }
  return out;
}

double p_necessary(double alpha) { return 2.0 / alpha; }
double p_sharp(double alpha) { return 4.0 / alpha - 2.0; }
double p_mock(double alpha, double beta) { return 2.0 * (2.0 - 2.0 * alpha + beta) / beta; }
double pq_bound(double alpha, double q) {
  if (q <= 1.0) return std::numeric_limits<double>::infinity();
  return q * (2.0 - alpha) / (alpha * (q - 1.0));
}

Thresholds thresholds(double alpha) {
  return {alpha, p_necessary(alpha), p_sharp(alpha), p_mock(alpha, alpha)};
}

double lp_lower_bound(const ConstructionParams& params, int ell, double p, int r) {
  const auto l2r = l2r_lower_bound(params, ell, r);
  // Hoelder moves t^(-ell(2r+1)/2) to t^(-ell(p+1)/2).
  return static_cast<double>(l2r.value) * ipow_double(params.t, ell * (2.0 * r - p) / 2.0);
}

int default_energy_order(const ConstructionParams& params, double p) {
  int r = 1;
  while (ipow_double(params.t0, r) <= static_cast<double>(params.N0)) ++r;
  return std::max(r, static_cast<int>(std::ceil(p / 2.0)));
}

RatioReport restriction_ratio(const Construction& c, int j, int ell, double p, double q,
                              const QuadratureOptions& opts) {
  if (ell < 0 || ell > j) throw InvalidArgument("restriction_ratio: need 0 <= ell <= j");
  if (!(p >= 1.0) || !(q >= 1.0)) throw InvalidArgument("restriction_ratio: need p, q >= 1");
  const auto& params = c.params;
  RatioReport rep;
  rep.j = j;
  rep.ell = ell;
  rep.p = p;
  rep.q = q;
  rep.thresholds = thresholds(params.alpha.value);
  rep.r = default_energy_order(params, p);
  double lp = 0.0;
  const double half = p / 2.0;
  if (half == std::floor(half) && half <= 10.0) {
    lp = static_cast<double>(exact_l2r_norm(c, j, ell, static_cast<int>(half)).value);
    rep.method = NormMethod::kExactBspline;
  } else {
    lp = lp_norm_quadrature(c, j, ell, p, opts).value;
    rep.method = NormMethod::kQuadrature;
  }
  rep.numerator = std::pow(lp, 1.0 / p);
  rep.denominator = ipow_double(params.t, -ell / (2.0 * q));
  rep.ratio = rep.numerator / rep.denominator;
  rep.lower_bound = lp_lower_bound(params, ell, p, rep.r);
  rep.slack = lp / rep.lower_bound;
  rep.failing_range = p >= 1.0 && p < rep.thresholds.p_sharp;
  rep.pq_region = p < pq_bound(params.alpha.value, q);
  return rep;
}

HolderReport holder_chain_check(const Construction& c, int j, int ell, double p, int r,
                                const QuadratureOptions& opts) {
  if (!(p >= 1.0) || p > 2.0 * r) throw InvalidArgument("holder_chain_check: need 1 <= p <= 2r");
  HolderReport rep;
  rep.j = j;
  rep.ell = ell;
  rep.p = p;
  rep.r = r;
  rep.l2r = static_cast<double>(exact_l2r_norm(c, j, ell, r).value);
  const double half = p / 2.0;
  if (half == std::floor(half)) {
    rep.lp = static_cast<double>(exact_l2r_norm(c, j, ell, static_cast<int>(half)).value);
    rep.lp_method = NormMethod::kExactBspline;
    rep.sup_on_grid = grid_sup(c, j, ell, opts.q);
  } else {
    const NormEstimate quad = lp_norm_quadrature(c, j, ell, p, opts);
    rep.lp = quad.value;
    rep.lp_method = NormMethod::kQuadrature;
    rep.sup_on_grid = quad.sup_on_grid;
  }
  rep.sup_bound = ipow_double(c.params.t, -ell / 2.0);
  rep.phi_at_zero = std::abs(f_mu_hat(c, j, ell, 0));
  const double sup_power = std::pow(rep.sup_bound, 2.0 * r - p);
  rep.rhs = rep.lp * sup_power;
  rep.slack = rep.rhs / rep.l2r - 1.0;
  rep.implied_lower = rep.l2r / sup_power;
  rep.lower_bound = lp_lower_bound(c.params, ell, p, r);
  return rep;
}

std::vector<EnergyIntegralRow> energy_integral(const Construction& c, int j, double gamma,
                                               const std::vector<Int>& cutoffs, Int q) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("energy_integral: need 0 < gamma < 1");
  if (q < 1) throw InvalidArgument("energy_integral: q must be >= 1");
  std::vector<Int> ks = cutoffs;
  std::sort(ks.begin(), ks.end());
  if (ks.empty() || ks.front() < 1) throw InvalidArgument("energy_integral: cutoffs must be >= 1");
  const LevelTransform tr(c, j, Weight::mu(), q);
  const double h = 1.0 / static_cast<double>(q);
  std::vector<EnergyIntegralRow> rows;
  CompensatedSum acc;  // trapezoid over [1, K] for the current K
  Int done = q;        // lattice index already covered
  auto integrand = [&](Int m) {
    const double xi = static_cast<double>(m) * h;
    return std::norm(tr.at_lattice(m)) * std::pow(xi, gamma - 1.0);
  };
  for (Int K : ks) {
    const Int end = K * q;
    if (end > done) {
      const std::size_t n = static_cast<std::size_t>(end - done);
      auto chunk = [&](std::size_t b, std::size_t e) {
        CompensatedSum s;
        for (std::size_t i = b; i < e; ++i) {
          const Int m = done + static_cast<Int>(i);
          s.add(0.5 * (integrand(m) + integrand(m + 1)));
        }
        return s;
      };
      auto combine = [](CompensatedSum a, const CompensatedSum& b) {
        a.add(b);
        return a;
      };
      acc.add(chunked_reduce(n, CompensatedSum{}, chunk, combine));
      done = end;
    }
    rows.push_back({static_cast<double>(K), 2.0 * h * acc.value()});
  }
  return rows;
}

bool BallReport::exact_ratio_is_one() const {
  return std::all_of(levels.begin(), levels.end(), [](const BallLevel& l) { return l.max_count == l.expected_count; });
}

double BallReport::sup_straddle() const {
  double s = 0.0;
  for (const auto& l : levels) s = std::max(s, l.max_straddle_ratio);
  return s;
}

BallReport ball_condition_report(const Construction& c, int j) {
  if (j < 0 || j >= static_cast<int>(c.levels.size())) throw InvalidArgument("ball_condition_report: level not built");
  const auto& p = c.params;
  const auto& atoms = c.levels[static_cast<std::size_t>(j)].atoms;
  const double alpha = p.alpha.value;
  BallReport rep;
  rep.j = j;
  for (int m = 0; m <= j; ++m) {
    const Int width = ipow(p.N, j - m);
    // Atoms are sorted, so equal prefixes are contiguous.
    std::vector<std::pair<Int, Int>> counts;
    for (Int a : atoms) {
      const Int b = a / width;
      if (counts.empty() || counts.back().first != b) counts.emplace_back(b, 0);
      ++counts.back().second;
    }
    BallLevel lv;
    lv.m = m;
    lv.surviving = static_cast<Int>(counts.size());
    lv.expected_count = ipow(p.t, j - m);
    const double scale = ipow_double(p.t, m - j);  // t^m / t^j
    for (std::size_t i = 0; i < counts.size(); ++i) {
      lv.max_count = std::max(lv.max_count, counts[i].second);
      Int pair = counts[i].second;
      if (i + 1 < counts.size() && counts[i + 1].first == counts[i].first + 1) pair += counts[i + 1].second;
      lv.max_straddle_ratio =
          std::max(lv.max_straddle_ratio, static_cast<double>(pair) * scale / std::pow(2.0, alpha));
    }
    lv.max_ratio = static_cast<double>(lv.max_count) * scale;
    rep.levels.push_back(lv);
  }
  return rep;
}

}  // namespace salem
