#include "pnl/density.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "pnl/errors.hpp"

namespace pnl {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2*pi)/2

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

GridFunction logDensityGrid(const DensitySpec& spec, double lo, double hi,
                            int n) {
  double dx = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = spec.logPdf(lo + dx * i);
  }
  return GridFunction(lo, dx, std::move(vals));
}

}  // namespace

DensitySpec DensitySpec::gaussian(double mean, double stdev) {
  if (!(stdev > 0.0) || !std::isfinite(mean) || !std::isfinite(stdev)) {
    throw ConstructionError("gaussian: stdev must be positive and finite");
  }
  DensitySpec s;
  s.params_ = GaussianParams{mean, stdev};
  return s;
}

DensitySpec DensitySpec::logMixLinExp(double c1, double c2, double c3,
                                      double c4) {
  if (!(c1 < 0.0)) {
    throw ConstructionError("logMixLinExp: c1 must be negative");
  }
  if (!(c2 * c3 > 0.0)) {
    throw ConstructionError("logMixLinExp: c2*c3 must be positive");
  }
  if (!std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(c3) ||
      !std::isfinite(c4)) {
    throw ConstructionError("logMixLinExp: parameters must be finite");
  }
  DensitySpec s;
  s.params_ = LogMixLinExpParams{c1, c2, c3, c4};
  return s;
}

DensitySpec DensitySpec::genMixTwoExp(double d1, double d2, double d3,
                                      double d4, double d5, double d6) {
  if (!(d3 > 0.0) || !(d4 > 0.0)) {
    throw ConstructionError("genMixTwoExp: d3 and d4 must be positive");
  }
  if (d5 == 0.0) {
    throw ConstructionError("genMixTwoExp: d5 must be nonzero");
  }
  for (double d : {d1, d2, d3, d4, d5, d6}) {
    if (!std::isfinite(d)) {
      throw ConstructionError("genMixTwoExp: parameters must be finite");
    }
  }
  DensitySpec s;
  s.params_ = GenMixTwoExpParams{d1, d2, d3, d4, d5, d6};
  return s;
}

DensitySpec DensitySpec::tabulated(GridFunction log_density) {
  if (log_density.size() < 33) {
    throw ConstructionError("tabulated: needs at least 33 grid nodes");
  }
  for (double v : log_density.values) {
    if (std::isnan(v)) {
      throw ConstructionError("tabulated: log-density contains NaN");
    }
  }
  DensitySpec s;
  s.range_ = {log_density.x0, log_density.xMax()};
  s.grid_points_ = static_cast<int>(log_density.size());
  s.params_ = TabulatedParams{std::move(log_density)};
  return s;
}

DensityFamily DensitySpec::family() const {
  switch (params_.index()) {
    case 0: return DensityFamily::kGaussian;
    case 1: return DensityFamily::kLogMixLinExp;
    case 2: return DensityFamily::kGenMixTwoExp;
    default: return DensityFamily::kTabulated;
  }
}

LogDensityDerivs DensitySpec::logPdfDerivs(double v) const {
  LogDensityDerivs out;
  switch (family()) {
    case DensityFamily::kGaussian: {
      const auto& p = std::get<GaussianParams>(params_);
      double z = (v - p.mean) / p.stdev;
      out.value = -0.5 * z * z - std::log(p.stdev) - kHalfLog2Pi;
      out.d1 = -z / p.stdev;
      out.d2 = -1.0 / (p.stdev * p.stdev);
      out.d3 = 0.0;
      break;
    }
    case DensityFamily::kLogMixLinExp: {
      const auto& p = std::get<LogMixLinExpParams>(params_);
      double e = p.c1 * std::exp(p.c2 * v);
      out.value = e + p.c3 * v + p.c4;
      out.d1 = p.c2 * e + p.c3;
      out.d2 = p.c2 * p.c2 * e;
      out.d3 = p.c2 * p.c2 * p.c2 * e;
      break;
    }
    case DensityFamily::kGenMixTwoExp: {
      const auto& p = std::get<GenMixTwoExpParams>(params_);
      double a = std::log(p.d3);
      double b = std::log(p.d4) + p.d5 * v;
      double m = std::max(a, b);
      double logsum = m + std::log(std::exp(a - m) + std::exp(b - m));
      double w = logistic(b - a);
      out.value = p.d1 * v + p.d2 * logsum + p.d6;
      out.d1 = p.d1 + p.d2 * p.d5 * w;
      out.d2 = p.d2 * p.d5 * p.d5 * w * (1.0 - w);
      out.d3 = p.d2 * p.d5 * p.d5 * p.d5 * w * (1.0 - w) * (1.0 - 2.0 * w);
      break;
    }
    case DensityFamily::kTabulated: {
      const auto& g = std::get<TabulatedParams>(params_).log_density;
      out.value = g(v);
      out.d1 = g.derivative(v, 1);
      out.d2 = g.derivative(v, 2);
      out.d3 = g.derivative(v, 3);
      break;
    }
  }
  out.value += shift_;
  return out;
}

double DensitySpec::logPdf(double v) const {
  if (family() == DensityFamily::kTabulated) {
    return std::get<TabulatedParams>(params_).log_density(v) + shift_;
  }
  return logPdfDerivs(v).value;
}

void DensitySpec::computeDefaultRange() const {
  if (family() == DensityFamily::kGaussian) {
    const auto& p = std::get<GaussianParams>(params_);
    range_ = {p.mean - 10.0 * p.stdev, p.mean + 10.0 * p.stdev};
    return;
  }
  // Start at an interior mode when one exists, expand until the log-density
  // has dropped far below it, then place the range at mean +/- 10 sigma.
  double center = 0.0;
  if (family() == DensityFamily::kLogMixLinExp) {
    const auto& p = std::get<LogMixLinExpParams>(params_);
    center = std::log(-p.c3 / (p.c1 * p.c2)) / p.c2;
  } else if (family() == DensityFamily::kGenMixTwoExp) {
    const auto& p = std::get<GenMixTwoExpParams>(params_);
    double wstar = -p.d1 / (p.d2 * p.d5);
    if (wstar > 0.0 && wstar < 1.0) {
      center = (std::log(wstar / (1.0 - wstar)) + std::log(p.d3 / p.d4)) / p.d5;
    }
  }
  double peak = logPdf(center) - shift_;
  double lo = center - 1.0, hi = center + 1.0;
  for (int i = 0; i < 64 && logPdf(lo) - shift_ > peak - 80.0; ++i) {
    lo = center - 2.0 * (center - lo);
  }
  for (int i = 0; i < 64 && logPdf(hi) - shift_ > peak - 80.0; ++i) {
    hi = center + 2.0 * (hi - center);
  }
  if (logPdf(lo) - shift_ > peak - 40.0 || logPdf(hi) - shift_ > peak - 40.0) {
    throw ConstructionError("density: tails do not decay; no finite support");
  }
  GridFunction g = logDensityGrid(*this, lo, hi, 4097);
  double gmax = g.maxValue();
  double sw = 0.0, sx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = std::exp(g.values[i] - gmax);
    if (i == 0 || i + 1 == g.size()) w *= 0.5;
    double x = g.xAt(i);
    sw += w;
    sx += w * x;
    sxx += w * x * x;
  }
  double m = sx / sw;
  double sd = std::sqrt(std::max(sxx / sw - m * m, 1e-300));
  range_ = {m - 10.0 * sd, m + 10.0 * sd};
}

std::pair<double, double> DensitySpec::tabulationRange() const {
  if (!range_) computeDefaultRange();
  return *range_;
}

DensitySpec DensitySpec::withRange(double lo, double hi,
                                   int grid_points) const {
  if (!(lo < hi)) throw ConstructionError("withRange: requires lo < hi");
  if (grid_points < 33) {
    throw ConstructionError("withRange: needs at least 33 grid points");
  }
  if (family() == DensityFamily::kTabulated) {
    const auto& g = std::get<TabulatedParams>(params_).log_density;
    if (lo < g.x0 || hi > g.xMax()) {
      throw RangeError("withRange: outside tabulated support");
    }
  }
  DensitySpec s = *this;
  s.range_ = {lo, hi};
  s.grid_points_ = grid_points;
  return s;
}

DensitySpec DensitySpec::normalized() const {
  auto [lo, hi] = tabulationRange();
  GridFunction g = logDensityGrid(*this, lo, hi, grid_points_);
  double gmax = g.maxValue();
  if (!std::isfinite(gmax)) {
    throw ConstructionError("normalized: log-density is not finite");
  }
  if (g.values.front() > gmax - 2.0 || g.values.back() > gmax - 2.0) {
    throw ConstructionError(
        "normalized: density does not decay over the tabulation range");
  }
  std::vector<double> p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    p[i] = std::exp(g.values[i] - gmax);
  }
  double integral = GridFunction(lo, g.dx, std::move(p)).trapezoidIntegral();
  if (!std::isfinite(integral) || integral <= 0.0) {
    throw ConstructionError("normalized: integral is not finite and positive");
  }
  DensitySpec s = *this;
  s.shift_ -= gmax + std::log(integral);
  return s;
}

DensitySpec DensitySpec::translated(double dv) const {
  DensitySpec s = *this;
  switch (family()) {
    case DensityFamily::kGaussian: {
      auto p = std::get<GaussianParams>(params_);
      p.mean += dv;
      s.params_ = p;
      break;
    }
    case DensityFamily::kLogMixLinExp: {
      auto p = std::get<LogMixLinExpParams>(params_);
      p.c1 *= std::exp(-p.c2 * dv);
      p.c4 -= p.c3 * dv;
      s.params_ = p;
      break;
    }
    case DensityFamily::kGenMixTwoExp: {
      auto p = std::get<GenMixTwoExpParams>(params_);
      p.d4 *= std::exp(-p.d5 * dv);
      p.d6 -= p.d1 * dv;
      s.params_ = p;
      break;
    }
    case DensityFamily::kTabulated: {
      auto p = std::get<TabulatedParams>(params_);
      p.log_density.x0 += dv;
      s.params_ = std::move(p);
      break;
    }
  }
  if (s.range_) {
    s.range_ = {s.range_->first + dv, s.range_->second + dv};
  }
  return s;
}

double DensitySpec::numericMean() const {
  auto [lo, hi] = tabulationRange();
  GridFunction g = logDensityGrid(*this, lo, hi, grid_points_);
  double gmax = g.maxValue();
  double sw = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = std::exp(g.values[i] - gmax);
    if (i == 0 || i + 1 == g.size()) w *= 0.5;
    sw += w;
    sx += w * g.xAt(i);
  }
  return sx / sw;
}

double DensitySpec::numericStd() const {
  auto [lo, hi] = tabulationRange();
  GridFunction g = logDensityGrid(*this, lo, hi, grid_points_);
  double gmax = g.maxValue();
  double sw = 0.0, sx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = std::exp(g.values[i] - gmax);
    if (i == 0 || i + 1 == g.size()) w *= 0.5;
    double x = g.xAt(i);
    sw += w;
    sx += w * x;
    sxx += w * x * x;
  }
  double m = sx / sw;
  return std::sqrt(std::max(sxx / sw - m * m, 0.0));
}

MonotoneCubic DensitySpec::cdf() const {
  auto [lo, hi] = tabulationRange();
  GridFunction g = logDensityGrid(*this, lo, hi, grid_points_);
  std::vector<double> p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p[i] = std::exp(g.values[i]);
  GridFunction c =
      GridFunction(lo, g.dx, std::move(p)).cumulativeTrapezoid(lo, 0.0);
  double total = c.values.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw StateError("cdf: density mass is not finite and positive");
  }
  for (double& v : c.values) v /= total;
  return MonotoneCubic(std::move(c));
}

std::vector<double> DensitySpec::sample(int n, Rng& rng) const {
  if (n < 0) throw PreconditionError("sample: n must be nonnegative");
  auto [lo, hi] = tabulationRange();
  GridFunction g = logDensityGrid(*this, lo, hi, grid_points_);
  std::vector<double> p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p[i] = std::exp(g.values[i]);
  GridFunction c =
      GridFunction(lo, g.dx, std::move(p)).cumulativeTrapezoid(lo, 0.0);
  double total = c.values.back();
  if (!(std::abs(total - 1.0) <= 1e-6)) {
    throw StateError("sample: density must be normalized over its range");
  }
  for (double& v : c.values) v /= total;
  MonotoneCubic inv(std::move(c));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = inv.inverse(rng.uniform());
  }
  return out;
}

const GaussianParams& DensitySpec::gaussianParams() const {
  return std::get<GaussianParams>(params_);
}
const LogMixLinExpParams& DensitySpec::logMixLinExpParams() const {
  return std::get<LogMixLinExpParams>(params_);
}
const GenMixTwoExpParams& DensitySpec::genMixTwoExpParams() const {
  return std::get<GenMixTwoExpParams>(params_);
}
const TabulatedParams& DensitySpec::tabulatedParams() const {
  return std::get<TabulatedParams>(params_);
}

FamilyTag classifyFamily(const DensitySpec& spec) {
  switch (spec.family()) {
    case DensityFamily::kGaussian: return FamilyTag::kGaussian;
    case DensityFamily::kLogMixLinExp: return FamilyTag::kLogMixLinExp;
    case DensityFamily::kGenMixTwoExp: return FamilyTag::kGenMixTwoExp;
    default: return FamilyTag::kOther;
  }
}

std::string familyTagName(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::kGaussian: return "gaussian";
    case FamilyTag::kLogMixLinExp: return "log_mix_lin_exp";
    case FamilyTag::kGenMixTwoExp: return "gen_mix_two_exp";
    default: return "other";
  }
}

std::string DensitySpec::toJsonText() const {
  nlohmann::json j;
  switch (family()) {
    case DensityFamily::kGaussian: {
      const auto& p = std::get<GaussianParams>(params_);
      j["family"] = "gaussian";
      j["params"] = {{"mean", p.mean}, {"stdev", p.stdev}};
      break;
    }
    case DensityFamily::kLogMixLinExp: {
      const auto& p = std::get<LogMixLinExpParams>(params_);
      j["family"] = "log_mix_lin_exp";
      j["params"] = {{"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}, {"c4", p.c4}};
      break;
    }
    case DensityFamily::kGenMixTwoExp: {
      const auto& p = std::get<GenMixTwoExpParams>(params_);
      j["family"] = "gen_mix_two_exp";
      j["params"] = {{"d1", p.d1}, {"d2", p.d2}, {"d3", p.d3},
                     {"d4", p.d4}, {"d5", p.d5}, {"d6", p.d6}};
      break;
    }
    case DensityFamily::kTabulated: {
      const auto& p = std::get<TabulatedParams>(params_);
      j["family"] = "tabulated";
      j["params"] = {{"x0", p.log_density.x0},
                     {"dx", p.log_density.dx},
                     {"values", p.log_density.values}};
      break;
    }
  }
  if (range_) {
    j["range"] = {range_->first, range_->second};
  } else {
    j["range"] = nullptr;
  }
  j["grid_points"] = grid_points_;
  j["shift"] = shift_;
  return j.dump();
}

DensitySpec DensitySpec::fromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("density JSON: ") + e.what());
  }
  try {
    std::string family = j.at("family").get<std::string>();
    const nlohmann::json& p = j.at("params");
    DensitySpec s = [&]() {
      if (family == "gaussian") {
        return gaussian(p.at("mean").get<double>(), p.at("stdev").get<double>());
      }
      if (family == "log_mix_lin_exp") {
        return logMixLinExp(p.at("c1").get<double>(), p.at("c2").get<double>(),
                            p.at("c3").get<double>(), p.at("c4").get<double>());
      }
      if (family == "gen_mix_two_exp") {
        return genMixTwoExp(p.at("d1").get<double>(), p.at("d2").get<double>(),
                            p.at("d3").get<double>(), p.at("d4").get<double>(),
                            p.at("d5").get<double>(), p.at("d6").get<double>());
      }
      if (family == "tabulated") {
        return tabulated(GridFunction(
            p.at("x0").get<double>(), p.at("dx").get<double>(),
            p.at("values").get<std::vector<double>>()));
      }
      throw ConstructionError("density JSON: unknown family '" + family + "'");
    }();
    if (j.contains("grid_points")) {
      s.grid_points_ = j.at("grid_points").get<int>();
      if (s.grid_points_ < 33) {
        throw ConstructionError("density JSON: grid_points must be >= 33");
      }
    }
    if (j.contains("range") && !j.at("range").is_null()) {
      auto r = j.at("range").get<std::vector<double>>();
      if (r.size() != 2 || !(r[0] < r[1])) {
        throw ConstructionError("density JSON: range must be [lo, hi]");
      }
      s.range_ = {r[0], r[1]};
    }
    if (j.contains("shift")) {
      s.shift_ = j.at("shift").get<double>();
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("density JSON: ") + e.what());
  }
}

}  // namespace pnl
