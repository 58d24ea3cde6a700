#include "pnl/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "pnl/errors.hpp"

namespace pnl {

namespace {

// Finite-difference weights (Fornberg's recursion) for the derivative of
// order m at point z over the given nodes. Exact for polynomials of degree
// up to nodes.size()-1.
std::vector<double> fdWeights(double z, const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

}  // namespace

GridFunction::GridFunction(double x0_, double dx_, std::vector<double> values_)
    : x0(x0_), dx(dx_), values(std::move(values_)) {
  if (dx <= 0.0) throw ConstructionError("GridFunction: dx must be positive");
  if (values.size() < 2) {
    throw ConstructionError("GridFunction: needs at least two nodes");
  }
}

bool GridFunction::contains(double x) const {
  double tol = 1e-9 * dx;
  return x >= x0 - tol && x <= xMax() + tol;
}

std::size_t GridFunction::nearestIndex(double x) const {
  double u = (x - x0) / dx;
  long i = std::lround(u);
  i = std::max(0L, std::min(i, static_cast<long>(size()) - 1));
  return static_cast<std::size_t>(i);
}

double GridFunction::operator()(double x) const {
  if (!contains(x)) {
    throw RangeError("GridFunction: query outside tabulated range");
  }
  const std::size_t n = size();
  double u = (x - x0) / dx;
  long i0 = static_cast<long>(std::floor(u)) - 1;
  long window = std::min<long>(4, static_cast<long>(n));
  i0 = std::max(0L, std::min(i0, static_cast<long>(n) - window));
  // Lagrange interpolation over the window nodes.
  double result = 0.0;
  for (long a = 0; a < window; ++a) {
    double la = 1.0;
    for (long b = 0; b < window; ++b) {
      if (b == a) continue;
      la *= (u - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    }
    result += la * values[static_cast<std::size_t>(i0 + a)];
  }
  return result;
}

double GridFunction::derivative(double x, int order) const {
  if (order < 1 || order > 3) {
    throw PreconditionError("GridFunction::derivative: order must be 1..3");
  }
  if (!contains(x)) {
    throw RangeError("GridFunction: query outside tabulated range");
  }
  const long n = static_cast<long>(size());
  if (n < 5) throw PreconditionError("GridFunction::derivative: needs >= 5 nodes");
  long i0 = static_cast<long>(std::lround((x - x0) / dx)) - 2;
  i0 = std::max(0L, std::min(i0, n - 5));
  std::vector<double> nodes(5);
  for (int a = 0; a < 5; ++a) nodes[a] = xAt(static_cast<std::size_t>(i0 + a));
  std::vector<double> w = fdWeights(x, nodes, order);
  double result = 0.0;
  for (int a = 0; a < 5; ++a) {
    result += w[a] * values[static_cast<std::size_t>(i0 + a)];
  }
  return result;
}

GridFunction GridFunction::derivativeGrid(int order) const {
  if (order < 1 || order > 3) {
    throw PreconditionError("GridFunction::derivativeGrid: order must be 1..3");
  }
  const long n = static_cast<long>(size());
  if (n < 5) {
    throw PreconditionError("GridFunction::derivativeGrid: needs >= 5 nodes");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    long i0 = std::max(0L, std::min(i - 2, n - 5));
    std::vector<double> nodes(5);
    for (int a = 0; a < 5; ++a) nodes[a] = xAt(static_cast<std::size_t>(i0 + a));
    std::vector<double> w = fdWeights(xAt(static_cast<std::size_t>(i)), nodes, order);
    double v = 0.0;
    for (int a = 0; a < 5; ++a) v += w[a] * values[static_cast<std::size_t>(i0 + a)];
    out[static_cast<std::size_t>(i)] = v;
  }
  return GridFunction(x0, dx, std::move(out));
}

GridFunction GridFunction::cumulativeTrapezoid(double anchor_x,
                                               double anchor_value) const {
  const std::size_t n = size();
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    acc[i] = acc[i - 1] + 0.5 * (values[i - 1] + values[i]) * dx;
  }
  double offset = anchor_value - acc[nearestIndex(anchor_x)];
  for (double& v : acc) v += offset;
  return GridFunction(x0, dx, std::move(acc));
}

double GridFunction::trapezoidIntegral() const {
  double s = 0.0;
  for (std::size_t i = 1; i < size(); ++i) {
    s += 0.5 * (values[i - 1] + values[i]) * dx;
  }
  return s;
}

double GridFunction::minValue() const {
  return *std::min_element(values.begin(), values.end());
}

double GridFunction::maxValue() const {
  return *std::max_element(values.begin(), values.end());
}

GridFunction GridFunction::shifted(double x_shift, double value_shift) const {
  GridFunction out = *this;
  out.x0 += x_shift;
  for (double& v : out.values) v += value_shift;
  return out;
}

MonotoneCubic::MonotoneCubic(GridFunction grid) : grid_(std::move(grid)) {
  const std::size_t n = grid_.size();
  const std::vector<double>& y = grid_.values;
  std::size_t ups = 0, downs = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (y[i] > y[i - 1]) ++ups;
    if (y[i] < y[i - 1]) ++downs;
  }
  if (ups > 0 && downs > 0) {
    throw ConstructionError("MonotoneCubic: values are not monotone");
  }
  increasing_ = downs == 0;

  // Fritsch-Carlson slope limiting keeps the interpolant monotone.
  const double dx = grid_.dx;
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / dx;
  slopes_.assign(n, 0.0);
  slopes_[0] = d[0];
  slopes_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slopes_[i] = 0.0;
    } else {
      slopes_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      slopes_[i] = 0.0;
      slopes_[i + 1] = 0.0;
      continue;
    }
    double a = slopes_[i] / d[i];
    double b = slopes_[i + 1] / d[i];
    double s = a * a + b * b;
    if (s > 9.0) {
      double t = 3.0 / std::sqrt(s);
      slopes_[i] = t * a * d[i];
      slopes_[i + 1] = t * b * d[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (!grid_.contains(x)) {
    throw RangeError("MonotoneCubic: query outside tabulated range");
  }
  const std::size_t n = grid_.size();
  double u = (x - grid_.x0) / grid_.dx;
  long i = static_cast<long>(std::floor(u));
  i = std::max(0L, std::min(i, static_cast<long>(n) - 2));
  double t = u - static_cast<double>(i);
  double y0 = grid_.values[static_cast<std::size_t>(i)];
  double y1 = grid_.values[static_cast<std::size_t>(i) + 1];
  double m0 = slopes_[static_cast<std::size_t>(i)] * grid_.dx;
  double m1 = slopes_[static_cast<std::size_t>(i) + 1] * grid_.dx;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
}

double MonotoneCubic::derivative(double x) const {
  if (!grid_.contains(x)) {
    throw RangeError("MonotoneCubic: query outside tabulated range");
  }
  const std::size_t n = grid_.size();
  double u = (x - grid_.x0) / grid_.dx;
  long i = static_cast<long>(std::floor(u));
  i = std::max(0L, std::min(i, static_cast<long>(n) - 2));
  double t = u - static_cast<double>(i);
  double y0 = grid_.values[static_cast<std::size_t>(i)];
  double y1 = grid_.values[static_cast<std::size_t>(i) + 1];
  double m0 = slopes_[static_cast<std::size_t>(i)] * grid_.dx;
  double m1 = slopes_[static_cast<std::size_t>(i) + 1] * grid_.dx;
  double t2 = t * t;
  double dydt = (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 +
                (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1;
  return dydt / grid_.dx;
}

namespace {

struct HermitePiece {
  double t, y0, y1, m0, m1, dx;
};

HermitePiece hermitePiece(const GridFunction& f, const GridFunction& fp,
                          double x) {
  if (f.size() != fp.size() || f.x0 != fp.x0 || f.dx != fp.dx) {
    throw PreconditionError("hermite: value and slope grids must share an axis");
  }
  if (!f.contains(x)) {
    throw RangeError("hermite: query outside tabulated range");
  }
  double u = (x - f.x0) / f.dx;
  long i = static_cast<long>(std::floor(u));
  i = std::max(0L, std::min(i, static_cast<long>(f.size()) - 2));
  std::size_t k = static_cast<std::size_t>(i);
  return HermitePiece{u - static_cast<double>(i), f.values[k], f.values[k + 1],
                      fp.values[k] * f.dx, fp.values[k + 1] * f.dx, f.dx};
}

}  // namespace

double hermiteValue(const GridFunction& f, const GridFunction& fp, double x) {
  HermitePiece p = hermitePiece(f, fp, x);
  double t2 = p.t * p.t, t3 = t2 * p.t;
  return (2 * t3 - 3 * t2 + 1) * p.y0 + (t3 - 2 * t2 + p.t) * p.m0 +
         (-2 * t3 + 3 * t2) * p.y1 + (t3 - t2) * p.m1;
}

double hermiteDerivative(const GridFunction& f, const GridFunction& fp,
                         double x) {
  HermitePiece p = hermitePiece(f, fp, x);
  double t2 = p.t * p.t;
  double dydt = (6 * t2 - 6 * p.t) * p.y0 + (3 * t2 - 4 * p.t + 1) * p.m0 +
                (-6 * t2 + 6 * p.t) * p.y1 + (3 * t2 - 2 * p.t) * p.m1;
  return dydt / p.dx;
}

double MonotoneCubic::inverse(double y) const {
  const std::vector<double>& v = grid_.values;
  double ylo = increasing_ ? v.front() : v.back();
  double yhi = increasing_ ? v.back() : v.front();
  if (y < ylo || y > yhi) {
    throw RangeError("MonotoneCubic::inverse: value outside range");
  }
  const MonotoneCubic& self = *this;
  return invertMonotone([&self](double x) { return self(x); }, y, grid_.x0,
                        grid_.xMax());
}

}  // namespace pnl
