#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cascade::numeric {

/// Bisection on a bracket [lo, hi] with f(lo) and f(hi) of opposite sign.
/// Stops once the bracket is narrower than `tol`.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol)
{
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0)
    return lo;
  if (f_hi == 0.0)
    return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0))
    throw std::invalid_argument("bisect: interval does not bracket a root");

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0)
      return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
/// Returns (argmax, max).
template <typename F>
std::pair<double, double> golden_section_maximize(F&& f, double a, double b, double tol)
{
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace cascade::numeric
