#include "pnl/stats.hpp"

#include <algorithm>
#include <cmath>

#include "pnl/errors.hpp"

namespace pnl {

double mean(const std::vector<double>& v) {
  if (v.empty()) throw PreconditionError("mean: empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw PreconditionError("variance: needs >= 2 values");
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double standardDeviation(const std::vector<double>& v) {
  return std::sqrt(variance(v));
}

double median(std::vector<double> v) {
  if (v.empty()) throw PreconditionError("median: empty input");
  std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  double hi = v[k];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + k - 1, v.end());
  return 0.5 * (v[k - 1] + hi);
}

double ksStatistic(std::vector<double> sample,
                   const std::function<double(double)>& cdf) {
  if (sample.empty()) throw PreconditionError("ksStatistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(f - lo), std::abs(f - hi)));
  }
  return d;
}

double ksCritical01(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

}  // namespace pnl
