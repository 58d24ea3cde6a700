#ifndef PNL_INVERT_MONOTONE_IMPL_HPP
#define PNL_INVERT_MONOTONE_IMPL_HPP

#include <cmath>

#include "pnl/errors.hpp"

namespace pnl {

template <class F>
double invertMonotone(const F& f, double target, double lo, double hi) {
  if (!(lo < hi)) {
    throw PreconditionError("invertMonotone: empty bracket");
  }
  double flo = f(lo);
  double fhi = f(hi);
  const bool up = flo <= fhi;
  // Cheap monotonicity probe at the quarter points.
  double prev = flo;
  for (int k = 1; k <= 4; ++k) {
    double v = f(lo + (hi - lo) * (k / 4.0));
    if (up ? (v < prev) : (v > prev)) {
      throw PreconditionError("invertMonotone: map is not monotone on the bracket");
    }
    prev = v;
  }
  double a = lo, b = hi;
  double fa = up ? flo : fhi;
  double fb = up ? fhi : flo;
  if (!up) std::swap(a, b);
  if (target < fa || target > fb) {
    throw RangeError("invertMonotone: target outside function range");
  }
  // a and b bracket the preimage with f(a) <= target <= f(b).
  for (int i = 0; i < 200 && std::abs(b - a) > 1e-13 * (1.0 + std::abs(a)); ++i) {
    double m = 0.5 * (a + b);
    if (f(m) <= target) {
      a = m;
    } else {
      b = m;
    }
  }
  double x = 0.5 * (a + b);
  // Newton polish with a finite-difference slope.
  for (int i = 0; i < 4; ++i) {
    double h = 1e-7 * (1.0 + std::abs(x));
    double xl = x - h, xr = x + h;
    if (xl < lo || xr > hi) break;
    double d = (f(xr) - f(xl)) / (2.0 * h);
    if (d == 0.0 || !std::isfinite(d)) break;
    double step = (f(x) - target) / d;
    double xn = x - step;
    if (xn < lo || xn > hi || !std::isfinite(xn)) break;
    x = xn;
    if (std::abs(step) < 1e-12 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace pnl

#endif  // PNL_INVERT_MONOTONE_IMPL_HPP
