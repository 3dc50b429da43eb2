#pragma once

#include <string>
#include <vector>

#include "salem/params.hpp"

namespace salem {

/// Reduced fraction with a positive denominator.
struct Rational {
  Wide num = 0;
  Wide den = 1;

  static Rational make(Wide num, Wide den);
  long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
  bool operator==(const Rational&) const = default;
  Rational operator+(const Rational& o) const;
};

std::string to_string(Wide v);
std::string to_string(const Rational& q);

/// Centered cardinal B-spline of order 2r (the 2r-fold convolution of
/// the indicator of [-1/2, 1/2]) at the integers |d| < r. It is the
/// Fourier transform of sinc^(2r); its value at 0 equals the integral of
/// sinc^(2r).
struct BsplineTable {
  int r = 0;
  std::vector<Rational> values;  // values[d + r - 1] for d = -(r-1)..(r-1)
  Wide common_den = 1;           // (2r - 1)!
  std::vector<Wide> numerators;  // values[i] = numerators[i] / common_den

  /// Zero for |d| >= r.
  Rational at(int d) const;
  Rational c2r() const { return at(0); }
};

/// Exact values from the truncated-power form
///   B(x) = 1/(n-1)! sum_k (-1)^k C(n,k) (x + n/2 - k)_+^(n-1),  n = 2r.
/// Supports 1 <= r <= 10.
BsplineTable bspline_integers(int r);

}  // namespace salem
