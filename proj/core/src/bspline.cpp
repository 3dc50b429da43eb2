#include "salem/bspline.hpp"

#include <algorithm>

#include "salem/errors.hpp"

namespace salem {

namespace {

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Wide binomial(int n, int k) {
  Wide c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Wide power(Wide b, int e) {
  Wide acc = 1;
  for (int i = 0; i < e; ++i) acc *= b;
  return acc;
}

}  // namespace

Rational Rational::make(Wide num, Wide den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

Rational Rational::operator+(const Rational& o) const {
  const Wide g = gcd_wide(den, o.den);
  return make(num * (o.den / g) + o.num * (den / g), den / g * o.den);
}

std::string to_string(Wide v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  UWide u = neg ? static_cast<UWide>(-(v + 1)) + 1 : static_cast<UWide>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(const Rational& q) {
  return q.den == 1 ? to_string(q.num) : to_string(q.num) + "/" + to_string(q.den);
}

Rational BsplineTable::at(int d) const {
  if (d <= -r || d >= r) return {0, 1};
  return values[static_cast<std::size_t>(d + r - 1)];
}

BsplineTable bspline_integers(int r) {
  if (r < 1 || r > 10) throw InvalidArgument("bspline_integers supports 1 <= r <= 10");
  const int n = 2 * r;
  BsplineTable tb;
  tb.r = r;
  Wide fact = 1;
  for (int i = 2; i < n; ++i) fact *= i;
  tb.common_den = fact;
  for (int d = -(r - 1); d <= r - 1; ++d) {
    // x + n/2 - k = d + r - k is an integer.
    Wide acc = 0;
    for (int k = 0; k <= n; ++k) {
      const int base = d + r - k;
      if (base <= 0) continue;
      const Wide term = binomial(n, k) * power(base, n - 1);
      acc += (k % 2 == 0) ? term : -term;
    }
    tb.numerators.push_back(acc);
    tb.values.push_back(Rational::make(acc, fact));
  }
  return tb;
}

}  // namespace salem
