#ifndef PNL_HSIC_HPP
#define PNL_HSIC_HPP

#include <cstdint>
#include <vector>

namespace pnl {

// Equal-length columns forming an n x p block; p >= 1.
using ColumnBlock = std::vector<std::vector<double>>;

// Gaussian kernel configuration. A bandwidth of zero requests the median
// heuristic; max_points caps the rows used by the test (seeded subsample).
struct KernelConfig {
  double bandwidth_x = 0.0;
  double bandwidth_y = 0.0;
  int max_points = 2000;
};

struct HsicResult {
  double statistic = 0.0;  // n * HSIC_b, biased V-statistic
  double threshold = 0.0;  // (1-alpha) quantile of the gamma null
  double alpha = 0.05;
  bool independent = false;  // statistic <= threshold
  long n = 0;                // rows entering the statistic (after subsampling)
};

// Median pairwise Euclidean distance over at most 1000 rows (uniform stride).
// All rows identical raises DegenerateInputError.
double medianBandwidth(const ColumnBlock& x);

// The raw statistic n * HSIC_b with centered Gaussian Gram matrices, no
// subsampling and no sample-size gate; returns 0 for n <= 2 where centering
// leaves no degrees of freedom to test.
double hsicStatistic(const ColumnBlock& x, const ColumnBlock& y,
                     const KernelConfig& cfg = {});

// Independence test with a moment-matched gamma approximation to the null
// distribution of the statistic. Requires n >= 20 (SampleSizeError), finite
// entries and no constant columns (DegenerateInputError). Blocks may be
// multivariate. When n exceeds cfg.max_points, a seed-determined subsample
// of paired rows is used.
HsicResult hsicTest(const ColumnBlock& x, const ColumnBlock& y,
                    double alpha = 0.05, const KernelConfig& cfg = {},
                    std::uint64_t seed = 0);

HsicResult hsicTest(const std::vector<double>& x, const std::vector<double>& y,
                    double alpha = 0.05, const KernelConfig& cfg = {},
                    std::uint64_t seed = 0);

}  // namespace pnl

#endif  // PNL_HSIC_HPP
