#include <cmath>
#include <vector>

#include "doctest.h"
#include "pnl/density.hpp"
#include "pnl/errors.hpp"
#include "pnl/rng.hpp"
#include "pnl/stats.hpp"

namespace {

using namespace pnl;

constexpr double kLogStdNormalAtZero = -0.9189385332046727;

void checkDerivsAgainstFd(const DensitySpec& spec, double v,
                          double rel = 5e-6) {
  const double h = 1e-4;
  auto f = [&](double x) { return spec.logPdf(x); };
  const LogDensityDerivs d = spec.logPdfDerivs(v);
  const double fd1 = (f(v + h) - f(v - h)) / (2 * h);
  const double fd2 = (f(v + h) - 2 * f(v) + f(v - h)) / (h * h);
  const double fd3 =
      (f(v + 2 * h) - 2 * f(v + h) + 2 * f(v - h) - f(v - 2 * h)) /
      (2 * h * h * h);
  CHECK(d.value == doctest::Approx(f(v)));
  CHECK(d.d1 == doctest::Approx(fd1).epsilon(rel));
  CHECK(d.d2 == doctest::Approx(fd2).epsilon(1e-3));
  CHECK(d.d3 == doctest::Approx(fd3).epsilon(5e-2));
}

double integralOfDensity(const DensitySpec& spec) {
  const auto [lo, hi] = spec.tabulationRange();
  const int n = 20001;
  const double dx = (hi - lo) / (n - 1);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    total += w * std::exp(spec.logPdf(lo + i * dx));
  }
  return total * dx;
}

TEST_CASE("standard gaussian log-density and analytic derivatives") {
  const DensitySpec g = DensitySpec::gaussian(0.0, 1.0);
  CHECK(g.logPdf(0.0) == doctest::Approx(kLogStdNormalAtZero).epsilon(1e-15));
  for (double v : {-2.0, -0.3, 0.0, 1.1, 2.7}) {
    const LogDensityDerivs d = g.logPdfDerivs(v);
    CHECK(d.d1 == doctest::Approx(-v));
    CHECK(d.d2 == doctest::Approx(-1.0));
    CHECK(d.d3 == doctest::Approx(0.0));
  }
  const DensitySpec g2 = DensitySpec::gaussian(1.5, 2.0);
  CHECK(g2.numericMean() == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(g2.numericStd() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(g2.logPdfDerivs(0.7).d1 == doctest::Approx(-(0.7 - 1.5) / 4.0));
}

TEST_CASE("one-sided double-exponential family: derivatives and mass") {
  const DensitySpec d = DensitySpec::logMixLinExp(-1.0, 0.3, 1.0, -1.0)
                            .normalized();
  for (double v : {-3.0, -1.0, 0.0, 2.0, 5.0}) checkDerivsAgainstFd(d, v);
  CHECK(integralOfDensity(d) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(classifyFamily(d) == FamilyTag::kLogMixLinExp);
}

TEST_CASE("two-slope exponential mixture family: derivatives and mass") {
  const DensitySpec d =
      DensitySpec::genMixTwoExp(1.0, -10.0 / 3.0, 1.0, 1.0, 0.9, 0.0)
          .normalized();
  for (double v : {-4.0, -1.0, 0.0, 1.5, 4.0}) checkDerivsAgainstFd(d, v);
  CHECK(integralOfDensity(d) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(classifyFamily(d) == FamilyTag::kGenMixTwoExp);
}

TEST_CASE("normalized shifts the additive constant only") {
  const DensitySpec raw = DensitySpec::logMixLinExp(-1.0, 0.3, 1.0, 2.0);
  const DensitySpec norm = raw.normalized();
  const double delta = norm.logPdf(0.5) - raw.logPdf(0.5);
  CHECK(norm.logPdf(-1.7) - raw.logPdf(-1.7) == doctest::Approx(delta));
  CHECK(norm.shift() == doctest::Approx(raw.shift() + delta));
}

TEST_CASE("translated density moves mass without reshaping") {
  const DensitySpec base =
      DensitySpec::genMixTwoExp(1.0, -10.0 / 3.0, 1.0, 1.0, 0.9, 0.0)
          .normalized();
  const double dv = 1.25;
  const DensitySpec moved = base.translated(dv);
  for (double v : {-2.0, 0.0, 1.0, 3.0})
    CHECK(moved.logPdf(v) == doctest::Approx(base.logPdf(v - dv)));
  CHECK(moved.numericMean() ==
        doctest::Approx(base.numericMean() + dv).epsilon(1e-6));
  CHECK(classifyFamily(moved) == classifyFamily(base));
}

TEST_CASE("inverse-cdf sampling matches the gaussian law") {
  const DensitySpec g = DensitySpec::gaussian(0.0, 1.0);
  Rng rng(2024);
  const auto draws = g.sample(4000, rng);
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  CHECK(ksStatistic(draws, cdf) < ksCritical01(draws.size()));
}

TEST_CASE("inverse-cdf sampling matches the tabulated cdf") {
  const DensitySpec d = DensitySpec::logMixLinExp(-1.0, 0.3, 1.0, 0.0)
                            .normalized();
  Rng rng(99);
  const auto draws = d.sample(4000, rng);
  const MonotoneCubic cdf = d.cdf();
  const auto [lo, hi] = d.tabulationRange();
  auto eval = [&](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return cdf(x);
  };
  CHECK(ksStatistic(draws, eval) < ksCritical01(draws.size()));
  CHECK(d.sample(0, rng).empty());
}

TEST_CASE("sampling an unnormalized spec is refused") {
  const DensitySpec raw = DensitySpec::logMixLinExp(-1.0, 0.3, 1.0, 4.0);
  Rng rng(1);
  CHECK_THROWS_AS(raw.sample(10, rng), StateError);
}

TEST_CASE("tabulated specs evaluate their grid and classify as other") {
  const DensitySpec g = DensitySpec::gaussian(0.0, 1.0);
  const auto [lo, hi] = g.tabulationRange();
  const int n = 4097;
  const double dx = (hi - lo) / (n - 1);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = g.logPdf(lo + i * dx);
  const DensitySpec tab = DensitySpec::tabulated(GridFunction(lo, dx, vals));
  CHECK(tab.logPdf(0.37) == doctest::Approx(g.logPdf(0.37)).epsilon(1e-8));
  CHECK(tab.logPdfDerivs(0.37).d1 ==
        doctest::Approx(g.logPdfDerivs(0.37).d1).epsilon(1e-6));
  CHECK(classifyFamily(tab) == FamilyTag::kOther);
  CHECK_THROWS_AS(tab.logPdf(hi + 1.0), RangeError);
}

TEST_CASE("family constructors validate their parameters") {
  CHECK_THROWS_AS(DensitySpec::gaussian(0.0, 0.0), ConstructionError);
  CHECK_THROWS_AS(DensitySpec::logMixLinExp(0.5, 0.3, 1.0, 0.0),
                  ConstructionError);
  CHECK_THROWS_AS(DensitySpec::logMixLinExp(-1.0, 0.3, -1.0, 0.0),
                  ConstructionError);
  CHECK_THROWS_AS(DensitySpec::genMixTwoExp(1.0, 1.0, -1.0, 1.0, 0.3, 0.0),
                  ConstructionError);
  CHECK_THROWS_AS(DensitySpec::genMixTwoExp(1.0, 1.0, 1.0, 1.0, 0.0, 0.0),
                  ConstructionError);
}

TEST_CASE("json round trip preserves every family") {
  const std::vector<DensitySpec> specs{
      DensitySpec::gaussian(0.3, 1.7),
      DensitySpec::logMixLinExp(-1.0, 0.3, 1.0, -0.2).normalized(),
      DensitySpec::genMixTwoExp(1.0, -10.0 / 3.0, 1.0, 1.0, 0.9, 0.1)
          .normalized()};
  for (const auto& s : specs) {
    const DensitySpec back = DensitySpec::fromJsonText(s.toJsonText());
    CHECK(back.family() == s.family());
    for (double v : {-1.0, 0.0, 0.8})
      CHECK(back.logPdf(v) == doctest::Approx(s.logPdf(v)).epsilon(1e-14));
    const auto [lo, hi] = s.tabulationRange();
    const auto [blo, bhi] = back.tabulationRange();
    CHECK(blo == doctest::Approx(lo));
    CHECK(bhi == doctest::Approx(hi));
  }
  CHECK_THROWS_AS(DensitySpec::fromJsonText("{"), ConstructionError);
  CHECK_THROWS_AS(DensitySpec::fromJsonText(R"({"family":"nope","params":{}})"),
                  ConstructionError);
}

TEST_CASE("family tag names are stable identifiers") {
  CHECK(familyTagName(FamilyTag::kGaussian) == "gaussian");
  CHECK(familyTagName(FamilyTag::kLogMixLinExp) == "log_mix_lin_exp");
  CHECK(familyTagName(FamilyTag::kGenMixTwoExp) == "gen_mix_two_exp");
  CHECK(familyTagName(FamilyTag::kOther) == "other");
}

TEST_CASE("explicit range windows override the default tabulation") {
  const DensitySpec g = DensitySpec::gaussian(0.0, 1.0).withRange(-4.0, 4.0);
  const auto [lo, hi] = g.tabulationRange();
  CHECK(lo == doctest::Approx(-4.0));
  CHECK(hi == doctest::Approx(4.0));
  CHECK_THROWS_AS(g.withRange(2.0, -2.0), ConstructionError);
}

}  // namespace
