#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "salem/construction.hpp"

namespace salem {

enum class NormMethod { kExactBspline, kQuadrature, kLowerBound, kClosedForm };

std::string_view to_string(NormMethod m);

/// ||phi||_p^p for phi = f_ell dmu_j-hat on the line.
struct NormEstimate {
  double p = 2.0;
  double value = 0.0;  // p-th power of the norm
  NormMethod method = NormMethod::kQuadrature;
  /// Quadrature only: analytic bound on the truncated tails |xi| > K from
  /// the envelope N^j t^(-ell/2) / (pi |xi|); +inf when p <= 1.
  double tail_bound = 0.0;
  /// Quadrature only: tail with |S|^p replaced by its periodic mean.
  double tail_estimate = 0.0;
  double K = 0.0;
  double h = 0.0;
  /// Same rule at step h/2 and the relative change.
  double refined_value = 0.0;
  double refinement_delta = 0.0;
  double sup_on_grid = 0.0;  // max |phi| over the grid
};

struct QuadratureOptions {
  Int K = 0;        // cutoff in units of 1; 0 means 32 N^j, else a multiple of N^j
  Int q = 4;        // grid step h = 1/q, q >= 4
  double self_check_tolerance = 1e-3;
};

/// Trapezoid rule for |phi|^p on the lattice (1/q) Z over [-K, K], plus
/// the h/2 self-check. Throws InvalidArgument for p < 1, ell > j, q < 4 or
/// K not a positive multiple of N^j; VerificationFailure when the h/2
/// value differs by more than the tolerance.
NormEstimate lp_norm_quadrature(const Construction& c, int j, int ell, double p, const QuadratureOptions& opts = {});

/// max |phi(m/q)| over the lattice. |phi(m/q)| is |sin| |S| (period q N^j)
/// over pi m / (q N^j), so the maximum lies in the first period.
double grid_sup(const Construction& c, int j, int ell, Int q = 4);

/// ||f_ell||_{L^q(dmu)} = t^(-ell/(2q)) against direct atom counting.
struct LqMass {
  int ell = 0;
  double q = 2.0;
  double norm = 0.0;   // t^(-ell/(2q))
  double mass = 0.0;   // t^(-ell/2)
  /// Per level j = ell..j_max: restricted atom count, the expected count
  /// sqrt_t^ell t^(j-ell), and the mass count * t^(-j).
  struct Level {
    int j = 0;
    Int count = 0;
    Int expected = 0;
    double direct_mass = 0.0;
  };
  std::vector<Level> levels;
  bool exact() const;
};

LqMass lq_mass(const Construction& c, int ell, double q);

/// Exponent thresholds for dimension alpha and decay beta.
double p_necessary(double alpha);             // 2 / alpha
double p_sharp(double alpha);                 // 4 / alpha - 2
double p_mock(double alpha, double beta);     // 2 (2 - 2 alpha + beta) / beta
double pq_bound(double alpha, double q);      // q (2 - alpha) / (alpha (q - 1)), +inf at q = 1

struct Thresholds {
  double alpha = 0.0;
  double p_necessary = 0.0;
  double p_sharp = 0.0;
  double p_mock_at_alpha = 0.0;
};
Thresholds thresholds(double alpha);

/// Lower bound on ||phi||_p^p from the exact L^2r bound and Hoelder:
///   C_2r N^ell r^(-ell-1) t^(-ell (p+1)/2).
double lp_lower_bound(const ConstructionParams& params, int ell, double p, int r);

/// Smallest integer r with r > 1/alpha and 2r >= p.
int default_energy_order(const ConstructionParams& params, double p);

struct RatioReport {
  int j = 0;
  int ell = 0;
  double p = 0.0;
  double q = 0.0;
  int r = 0;                // order used for the lower bound
  NormMethod method = NormMethod::kQuadrature;
  double numerator = 0.0;   // ||phi||_p
  double denominator = 0.0; // t^(-ell/(2q))
  double ratio = 0.0;
  double lower_bound = 0.0; // lp_lower_bound, for ||phi||_p^p
  double slack = 0.0;       // numerator^p / lower_bound
  bool failing_range = false;  // 1 <= p < 4/alpha - 2
  bool pq_region = false;      // p < q (2 - alpha) / (alpha (q - 1))
  Thresholds thresholds;
};

/// Exact route for even integer p, quadrature otherwise.
RatioReport restriction_ratio(const Construction& c, int j, int ell, double p, double q,
                              const QuadratureOptions& opts = {});

struct HolderReport {
  int j = 0;
  int ell = 0;
  double p = 0.0;
  int r = 0;
  double l2r = 0.0;          // ||phi||_{2r}^{2r}, exact
  double lp = 0.0;           // ||phi||_p^p
  NormMethod lp_method = NormMethod::kQuadrature;
  double sup_bound = 0.0;    // t^(-ell/2)
  double phi_at_zero = 0.0;  // |phi(0)|
  double sup_on_grid = 0.0;
  double rhs = 0.0;          // lp * sup_bound^(2r-p)
  double slack = 0.0;        // rhs / l2r - 1
  double implied_lower = 0.0;  // l2r / sup_bound^(2r-p)
  double lower_bound = 0.0;    // lp_lower_bound
  bool chain_holds() const { return l2r <= rhs * (1 + 1e-12); }
  bool implied_holds() const { return implied_lower >= lower_bound; }
  bool bound_holds() const { return lp >= lower_bound; }
};

/// Requires 1 <= p <= 2r.
HolderReport holder_chain_check(const Construction& c, int j, int ell, double p, int r,
                                const QuadratureOptions& opts = {});

struct EnergyIntegralRow {
  double K = 0.0;
  double value = 0.0;
};

/// Truncated int_{1 <= |xi| <= K} |mu_j-hat(xi)|^2 |xi|^(gamma - 1) d xi
/// for each cutoff, by the trapezoid rule with step 1/q.
std::vector<EnergyIntegralRow> energy_integral(const Construction& c, int j, double gamma,
                                               const std::vector<Int>& cutoffs, Int q = 4);

/// mu_j mass of N-adic intervals of length N^(-m) over |I|^alpha, for
/// m = 0..j. Because N^alpha = t the exact ratio is count * t^m / t^j.
struct BallLevel {
  int m = 0;
  Int surviving = 0;
  Int max_count = 0;            // atoms of level j in one interval
  Int expected_count = 0;       // t^(j-m)
  double max_ratio = 0.0;       // max count * t^m / t^j
  double max_straddle_ratio = 0.0;  // windows [b, b+2) N^(-m)
};

struct BallReport {
  int j = 0;
  std::vector<BallLevel> levels;
  bool exact_ratio_is_one() const;
  double sup_straddle() const;
};

BallReport ball_condition_report(const Construction& c, int j);

}  // namespace salem
