#ifndef PNL_STATS_HPP
#define PNL_STATS_HPP

#include <functional>
#include <vector>

namespace pnl {

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);
double standardDeviation(const std::vector<double>& v);
double median(std::vector<double> v);

// Kolmogorov-Smirnov statistic of a sample against a CDF.
double ksStatistic(std::vector<double> sample,
                   const std::function<double(double)>& cdf);

// Critical value of the one-sample KS test at significance level 0.01.
double ksCritical01(std::size_t n);

}  // namespace pnl

#endif  // PNL_STATS_HPP
