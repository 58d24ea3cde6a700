#ifndef PNL_GRID_FUNCTION_HPP
#define PNL_GRID_FUNCTION_HPP

#include <cstddef>
#include <vector>

namespace pnl {

// A real function tabulated on a uniform grid x0 + i*dx.
// Queries outside [x0, xMax()] raise RangeError (no extrapolation).
struct GridFunction {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(double x0_, double dx_, std::vector<double> values_);

  std::size_t size() const { return values.size(); }
  double xAt(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double xMax() const { return xAt(size() - 1); }
  bool contains(double x) const;

  // Cubic interpolation through the four nearest nodes
  // (quadratic or linear near the edges when fewer nodes are available).
  double operator()(double x) const;

  // Derivative of order 1..3 at x, from five-point stencils on the grid
  // values followed by cubic interpolation of the stencil results.
  double derivative(double x, int order = 1) const;

  // Derivative grid of order 1..3 via five-point stencils
  // (one-sided stencil windows near the edges).
  GridFunction derivativeGrid(int order = 1) const;

  // Antiderivative by the cumulative trapezoid rule, anchored so that the
  // result equals anchor_value at the grid node nearest anchor_x.
  GridFunction cumulativeTrapezoid(double anchor_x, double anchor_value) const;

  double trapezoidIntegral() const;
  double minValue() const;
  double maxValue() const;

  // Same values on a translated axis, with a constant added.
  GridFunction shifted(double x_shift, double value_shift) const;

  std::size_t nearestIndex(double x) const;
};

// C1 monotone cubic interpolant (Fritsch-Carlson slopes) over a
// GridFunction with monotone values. Supports inversion.
class MonotoneCubic {
 public:
  explicit MonotoneCubic(GridFunction grid);

  double operator()(double x) const;
  double derivative(double x) const;

  // Preimage of y under the interpolant; y outside the value range raises
  // RangeError. Bisection with Newton polish, tolerance 1e-13 in argument.
  double inverse(double y) const;

  bool increasing() const { return increasing_; }
  const GridFunction& grid() const { return grid_; }

 private:
  GridFunction grid_;
  std::vector<double> slopes_;
  bool increasing_ = true;
};

// Cubic Hermite evaluation of a function tabulated together with its
// derivative on the same axis. C1 and fourth-order accurate for smooth data.
double hermiteValue(const GridFunction& f, const GridFunction& fp, double x);
double hermiteDerivative(const GridFunction& f, const GridFunction& fp, double x);

// Generic inversion of a monotone scalar function on [lo, hi] by bisection
// with a Newton polish; tolerance 1e-12 in the argument. The target must lie
// between f(lo) and f(hi), otherwise RangeError.
template <class F>
double invertMonotone(const F& f, double target, double lo, double hi);

}  // namespace pnl

#include "pnl/invert_monotone_impl.hpp"

#endif  // PNL_GRID_FUNCTION_HPP
