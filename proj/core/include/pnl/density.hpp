#ifndef PNL_DENSITY_HPP
#define PNL_DENSITY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pnl/grid_function.hpp"
#include "pnl/rng.hpp"

namespace pnl {

class Rng;

// Density families closed under the model's disturbance constructions.
enum class DensityFamily { kGaussian, kLogMixLinExp, kGenMixTwoExp, kTabulated };

// Classification result; tabulated densities always classify as kOther.
enum class FamilyTag { kGaussian, kLogMixLinExp, kGenMixTwoExp, kOther };

struct GaussianParams {
  double mean = 0.0;
  double stdev = 1.0;
};

// log p(v) = c1*exp(c2*v) + c3*v + c4, with c1 < 0 and c2*c3 > 0.
// One-sided exponential-of-exponential decay, linear-exponential other side.
struct LogMixLinExpParams {
  double c1, c2, c3, c4;
};

// log p(v) = d1*v + d2*log(d3 + d4*exp(d5*v)) + d6, with d3, d4 >= 0.
// Asymptotically exponential in both tails with slopes d1 and d1 + d2*d5.
struct GenMixTwoExpParams {
  double d1, d2, d3, d4, d5, d6;
};

struct TabulatedParams {
  GridFunction log_density;
};

// Log-density value and first three derivatives at a point.
struct LogDensityDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// A one-dimensional density described by its log-density. Parametric
// families carry analytic derivatives; tabulated densities differentiate
// their grid with five-point stencils. Every spec has a tabulation range
// and grid resolution used for normalization and sampling.
class DensitySpec {
 public:
  static DensitySpec gaussian(double mean, double stdev);
  static DensitySpec logMixLinExp(double c1, double c2, double c3, double c4);
  static DensitySpec genMixTwoExp(double d1, double d2, double d3, double d4,
                                  double d5, double d6);
  static DensitySpec tabulated(GridFunction log_density);

  DensityFamily family() const;

  // Log-density with derivatives up to third order at v.
  // Tabulated specs raise RangeError outside their grid.
  LogDensityDerivs logPdfDerivs(double v) const;
  double logPdf(double v) const;

  // Tabulation window; computed as numeric mean +/- 10 standard deviations
  // (4096 nodes) when not set explicitly. Tabulated specs use their grid.
  std::pair<double, double> tabulationRange() const;
  int gridPoints() const { return grid_points_; }
  DensitySpec withRange(double lo, double hi, int grid_points = 4096) const;

  // Returns a copy whose additive constant is shifted so the trapezoid
  // integral of the density over the tabulation range equals one.
  // ConstructionError when the integral is non-finite or tails fail to decay.
  DensitySpec normalized() const;

  // Extra additive constant applied on top of the family form.
  double shift() const { return shift_; }

  // Density of (V + dv) when V follows this spec; families are closed
  // under translation so parameters are rewritten in place.
  DensitySpec translated(double dv) const;

  // Mean and standard deviation by quadrature over the tabulation range.
  double numericMean() const;
  double numericStd() const;

  // i.i.d. draws by inverse-CDF sampling with monotone cubic interpolation.
  // StateError unless the density integrates to one over its range (1e-6).
  std::vector<double> sample(int n, Rng& rng) const;

  // CDF on the tabulation grid (normalized to end exactly at one).
  MonotoneCubic cdf() const;

  std::string toJsonText() const;
  static DensitySpec fromJsonText(const std::string& text);

  const GaussianParams& gaussianParams() const;
  const LogMixLinExpParams& logMixLinExpParams() const;
  const GenMixTwoExpParams& genMixTwoExpParams() const;
  const TabulatedParams& tabulatedParams() const;

 private:
  DensitySpec() = default;
  void computeDefaultRange() const;

  std::variant<GaussianParams, LogMixLinExpParams, GenMixTwoExpParams,
               TabulatedParams>
      params_;
  double shift_ = 0.0;
  mutable std::optional<std::pair<double, double>> range_;
  int grid_points_ = 4096;
};

// Family tag of a spec; tabulated specs are never claimed to be parametric.
FamilyTag classifyFamily(const DensitySpec& spec);

std::string familyTagName(FamilyTag tag);

}  // namespace pnl

#endif  // PNL_DENSITY_HPP
