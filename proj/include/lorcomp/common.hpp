#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorcomp {

/// Error raised for malformed input streams (CSV rows, JSON documents).
/// Messages name the offending row or field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Pairwise (tree) reduction. The summation order depends only on the length
/// of the range, never on scheduling, so repeated runs produce bit-identical
/// sums.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// x^k for integer k >= 0 by repeated squaring.
inline double pow_int(double x, int k) {
  double acc = 1.0;
  double base = x;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) acc *= base;
    base *= base;
  }
  return acc;
}

/// Binomial coefficient as a double. Each partial product in the
/// multiplicative form is itself a binomial coefficient, so the division is
/// exact while values stay below 2^53.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * double(n - k + i) / double(i);
  return acc;
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

/// Adaptive Simpson quadrature with Richardson correction, targeting a
/// relative tolerance against the first whole-interval estimate.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = rel_tol * std::max(std::abs(whole), 1e-30);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, 48);
}

}  // namespace detail
}  // namespace lorcomp
