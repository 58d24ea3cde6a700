#include "pnl/hsic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include <boost/math/distributions/gamma.hpp>

#include "pnl/errors.hpp"
#include "pnl/rng.hpp"

namespace pnl {

namespace {

std::size_t blockRows(const ColumnBlock& x, const char* side) {
  if (x.empty()) throw DegenerateInputError(std::string(side) + " block has no columns");
  std::size_t n = x[0].size();
  for (const auto& col : x) {
    if (col.size() != n) {
      throw PreconditionError(std::string(side) + " block columns differ in length");
    }
  }
  return n;
}

void checkBlock(const ColumnBlock& x, const char* side) {
  for (std::size_t c = 0; c < x.size(); ++c) {
    double lo = x[c].empty() ? 0.0 : x[c][0], hi = lo;
    for (double v : x[c]) {
      if (!std::isfinite(v)) {
        throw DegenerateInputError(std::string(side) + " block contains a non-finite value");
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
      throw DegenerateInputError(std::string(side) + " block column " +
                                 std::to_string(c) + " is constant");
    }
  }
}

double sqDist(const ColumnBlock& x, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (const auto& col : x) {
    double d = col[i] - col[j];
    s += d * d;
  }
  return s;
}

// Gram matrix of the Gaussian kernel exp(-||xi-xj||^2 / (2 sigma^2)).
std::vector<double> gram(const ColumnBlock& x, std::size_t n, double sigma) {
  std::vector<double> k(n * n);
  double inv = -0.5 / (sigma * sigma);
  for (std::size_t i = 0; i < n; ++i) {
    k[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = std::exp(inv * sqDist(x, i, j));
      k[i * n + j] = v;
      k[j * n + i] = v;
    }
  }
  return k;
}

// Double centering in place: K <- H K H.
void center(std::vector<double>& k, std::size_t n) {
  std::vector<double> rowMean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k[i * n + j];
    rowMean[i] = s / static_cast<double>(n);
    grand += s;
  }
  grand /= static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k[i * n + j] += grand - rowMean[i] - rowMean[j];
    }
  }
}

double offDiagMean(const std::vector<double>& k, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) s += k[i * n + j];
    }
  }
  return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

ColumnBlock takeRows(const ColumnBlock& x, const std::vector<std::size_t>& idx) {
  ColumnBlock out(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) {
    out[c].reserve(idx.size());
    for (std::size_t i : idx) out[c].push_back(x[c][i]);
  }
  return out;
}

}  // namespace

double medianBandwidth(const ColumnBlock& x) {
  std::size_t n = blockRows(x, "bandwidth");
  if (n < 2) throw SampleSizeError("medianBandwidth: need at least two rows");
  std::size_t stride = (n + 999) / 1000;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
  std::vector<double> dists;
  dists.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      dists.push_back(std::sqrt(sqDist(x, idx[a], idx[b])));
    }
  }
  std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  double med = dists[mid];
  if (dists.size() % 2 == 0) {
    double lower = *std::max_element(dists.begin(), dists.begin() + mid);
    med = 0.5 * (med + lower);
  }
  if (!(med > 0.0)) {
    throw DegenerateInputError("medianBandwidth: all sampled rows coincide");
  }
  return med;
}

double hsicStatistic(const ColumnBlock& x, const ColumnBlock& y,
                     const KernelConfig& cfg) {
  std::size_t n = blockRows(x, "X");
  std::size_t ny = blockRows(y, "Y");
  if (n != ny) throw PreconditionError("hsicStatistic: X and Y row counts differ");
  if (n <= 2) return 0.0;
  double sx = cfg.bandwidth_x > 0.0 ? cfg.bandwidth_x : medianBandwidth(x);
  double sy = cfg.bandwidth_y > 0.0 ? cfg.bandwidth_y : medianBandwidth(y);
  std::vector<double> k = gram(x, n, sx);
  std::vector<double> l = gram(y, n, sy);
  center(k, n);
  center(l, n);
  double s = std::inner_product(k.begin(), k.end(), l.begin(), 0.0);
  return s / static_cast<double>(n);
}

HsicResult hsicTest(const ColumnBlock& x, const ColumnBlock& y, double alpha,
                    const KernelConfig& cfg, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw PreconditionError("hsicTest: alpha must lie in (0, 1)");
  }
  std::size_t n = blockRows(x, "X");
  std::size_t ny = blockRows(y, "Y");
  if (n != ny) throw PreconditionError("hsicTest: X and Y row counts differ");
  if (n < 20) throw SampleSizeError("hsicTest: need n >= 20 rows");
  checkBlock(x, "X");
  checkBlock(y, "Y");

  ColumnBlock xs = x, ys = y;
  std::size_t m = n;
  if (cfg.max_points > 0 && n > static_cast<std::size_t>(cfg.max_points)) {
    m = static_cast<std::size_t>(cfg.max_points);
    Rng rng = Rng::forStream(seed, "hsic_subsample");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + rng.index(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    xs = takeRows(x, idx);
    ys = takeRows(y, idx);
  }

  double sx = cfg.bandwidth_x > 0.0 ? cfg.bandwidth_x : medianBandwidth(xs);
  double sy = cfg.bandwidth_y > 0.0 ? cfg.bandwidth_y : medianBandwidth(ys);
  std::vector<double> k = gram(xs, m, sx);
  std::vector<double> l = gram(ys, m, sy);
  double mux = offDiagMean(k, m);
  double muy = offDiagMean(l, m);
  center(k, m);
  center(l, m);

  double md = static_cast<double>(m);
  double stat = std::inner_product(k.begin(), k.end(), l.begin(), 0.0) / md;

  // Moment-matched gamma null: mean and variance of HSIC_b under
  // independence, then shape/scale for the n-scaled statistic.
  double meanH = (1.0 + mux * muy - mux - muy) / md;
  double varSum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      double b = k[i * m + j] * l[i * m + j] / 6.0;
      varSum += b * b;
    }
  }
  double varH = 72.0 * (md - 4.0) * (md - 5.0) /
                (md * (md - 1.0) * (md - 2.0) * (md - 3.0)) * varSum /
                (md * (md - 1.0));
  if (!(meanH > 0.0) || !(varH > 0.0)) {
    throw DegenerateInputError("hsicTest: null moments are not positive");
  }
  double shape = meanH * meanH / varH;
  double scale = varH * md / meanH;
  boost::math::gamma_distribution<double> null(shape, scale);
  double threshold = boost::math::quantile(null, 1.0 - alpha);

  HsicResult r;
  r.statistic = stat;
  r.threshold = threshold;
  r.alpha = alpha;
  r.independent = stat <= threshold;
  r.n = static_cast<long>(m);
  return r;
}

HsicResult hsicTest(const std::vector<double>& x, const std::vector<double>& y,
                    double alpha, const KernelConfig& cfg, std::uint64_t seed) {
  return hsicTest(ColumnBlock{x}, ColumnBlock{y}, alpha, cfg, seed);
}

}  // namespace pnl
