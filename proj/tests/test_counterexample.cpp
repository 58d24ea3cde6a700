#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "pnl/counterexample.hpp"
#include "pnl/errors.hpp"
#include "pnl/hsic.hpp"
#include "pnl/rng.hpp"
#include "pnl/stats.hpp"

namespace {

using namespace pnl;

TEST_CASE("situation names round trip and reject unknowns") {
  for (Situation s : {Situation::kI, Situation::kII, Situation::kV}) {
    const auto back = situationFromName(situationName(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(situationFromName("II") == Situation::kII);
  CHECK(situationFromName("V") == Situation::kV);
  CHECK_FALSE(situationFromName("iv").has_value());
  CHECK_FALSE(situationFromName("").has_value());
}

TEST_CASE("observation maps invert exactly on their domains") {
  const std::vector<ObservationMap> maps{
      ObservationMap(),
      ObservationMap(ObservationMap::Kind::kLinear, 2.0, -1.0),
      ObservationMap(ObservationMap::Kind::kHalfPlusCbrt),
      ObservationMap(ObservationMap::Kind::kCubePlusLinear, 0.2),
      ObservationMap(ObservationMap::Kind::kTanhScaled, 8.0),
      ObservationMap(ObservationMap::Kind::kLogShifted, 6.0)};
  for (const auto& m : maps) {
    for (double v : {-4.0, -1.0, -0.1, 0.0, 0.3, 2.0, 5.0}) {
      if (m.kind() == ObservationMap::Kind::kLogShifted && v <= -m.a() + 0.1)
        continue;
      const double y = m(v);
      // Absolute floor: the cube-root branch has infinite slope at v = 0,
      // where relative tolerance around an exact zero is meaningless.
      CHECK(std::fabs(m.inverse(y) - v) < 1e-6 * std::max(1.0, std::fabs(v)));
    }
    CHECK_FALSE(m.name().empty());
    const ObservationMap back = ObservationMap::fromJsonText(m.toJsonText());
    CHECK(back.kind() == m.kind());
    CHECK(back(0.25) == doctest::Approx(m(0.25)));
  }
  CHECK(ObservationMap(ObservationMap::Kind::kLinear, 2.0).increasing());
  CHECK_FALSE(ObservationMap(ObservationMap::Kind::kLinear, -2.0).increasing());
  const ObservationMap logm(ObservationMap::Kind::kLogShifted, 6.0);
  CHECK_THROWS_AS(logm(-6.0), DomainError);
  CHECK_THROWS_AS(logm(-7.0), DomainError);
}

TEST_CASE("linear-gaussian construction leaves both readings gaussian") {
  const CounterexampleModel m = buildCounterexample(Situation::kI);
  CHECK(classifyFamily(m.pT1()) == FamilyTag::kGaussian);
  CHECK(classifyFamily(m.pE2()) == FamilyTag::kGaussian);
  CHECK(m.hpp(0.3) == doctest::Approx(0.0));
  const double slope = m.hp(0.0);
  CHECK(m.hp(1.0) == doctest::Approx(slope));
  const auto [tlo, thi] = m.tRange();
  const auto res =
      theorem1Residual(m, linspace(tlo, thi, 40), linspace(-3.0, 3.0, 40));
  CHECK(res.max_eq4 < 1e-10);
  CHECK(res.max_eq5 < 1e-10);
}

TEST_CASE("exponential-family construction satisfies both identities") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  CHECK(classifyFamily(m.pT1()) == FamilyTag::kLogMixLinExp);
  CHECK(classifyFamily(m.pE2()) == FamilyTag::kLogMixLinExp);
  const auto [tlo, thi] = m.tRange();
  const auto [elo, ehi] = m.eRange();
  const auto res =
      theorem1Residual(m, linspace(tlo, thi, 80), linspace(elo, ehi, 80));
  CHECK(res.max_eq4 < 1e-12);
  CHECK(res.max_eq5 < 1e-12);
  CHECK(res.skipped == 0);
}

TEST_CASE("backward slope equals the cross-derivative ratio at any anchor") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  for (double z : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    double previous = 0.0;
    bool first = true;
    for (double t : {-0.8, 0.0, 1.2}) {
      const double e = z - m.h(t);
      const LogDensityDerivs d1 = m.eta1Derivs(t);
      const LogDensityDerivs d2 = m.eta2Derivs(e);
      const double den =
          d1.d2 + d2.d2 * m.hp(t) * m.hp(t) - d2.d1 * m.hpp(t);
      const double ratio = d2.d2 * m.hp(t) / den;
      CHECK(m.h1p(z) == doctest::Approx(ratio).epsilon(1e-10));
      if (!first) CHECK(ratio == doctest::Approx(previous).epsilon(1e-10));
      previous = ratio;
      first = false;
    }
  }
}

TEST_CASE("smooth closure construction satisfies both identities") {
  const CounterexampleModel m = buildCounterexample(Situation::kV);
  const auto [tlo, thi] = m.tRange();
  const auto [elo, ehi] = m.eRange();
  const auto res =
      theorem1Residual(m, linspace(tlo, thi, 60), linspace(elo, ehi, 60));
  CHECK(res.max_eq4 < 1e-10);
  // The backward slope here comes from a tabulated solution, so the ratio
  // check inherits grid interpolation error on top of the solver tolerance.
  CHECK(res.max_eq5 < 1e-6);
  CHECK(m.hp(thi) / m.hp(0.0) < 0.05);
  REQUIRE(m.odeSolution().has_value());
  CHECK(consistencyResidual(*m.odeSolution(), m.odeParams()) < 1e-6);
}

TEST_CASE("smooth construction inner map derivatives are consistent") {
  const CounterexampleModel m = buildCounterexample(Situation::kV);
  const double h = 1e-4;
  for (double t : {-1.5, -0.3, 0.4, 2.5}) {
    CHECK(m.hp(t) ==
          doctest::Approx((m.h(t + h) - m.h(t - h)) / (2 * h)).epsilon(1e-5));
    CHECK(m.hpp(t) ==
          doctest::Approx((m.hp(t + h) - m.hp(t - h)) / (2 * h)).epsilon(1e-4));
    CHECK(m.hppp(t) == doctest::Approx((m.hpp(t + h) - m.hpp(t - h)) / (2 * h))
                           .epsilon(1e-3));
  }
}

TEST_CASE("log-density derivatives come from the attached densities") {
  for (Situation s : {Situation::kI, Situation::kII}) {
    const CounterexampleModel m = buildCounterexample(s);
    for (double t : {-0.7, 0.0, 0.9}) {
      const LogDensityDerivs a = m.eta1Derivs(t);
      const LogDensityDerivs b = m.pT1().logPdfDerivs(t);
      CHECK(a.d1 == doctest::Approx(b.d1));
      CHECK(a.d2 == doctest::Approx(b.d2));
      CHECK(a.d3 == doctest::Approx(b.d3));
    }
  }
}

TEST_CASE("tabulated backward map integrates its own slope") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  const GridFunction h1 = computeH1(m, 1e-3);
  for (double z : {-2.0, -0.4, 0.0, 1.1, 2.5})
    CHECK(h1(z) - h1(0.0) ==
          doctest::Approx(m.h1(z) - m.h1(0.0)).epsilon(1e-7));
  CHECK_THROWS_AS(computeH1(m, 0.0), PreconditionError);
}

TEST_CASE("centering moves both disturbances to zero mean") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  CHECK(m.pT1().numericMean() == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.pE2().numericMean() == doctest::Approx(0.0).epsilon(1e-6));
  CounterexampleConfig raw;
  raw.center = false;
  const CounterexampleModel u = buildCounterexample(Situation::kII, raw);
  CHECK(std::fabs(u.pE2().numericMean()) > 1e-3);
}

TEST_CASE("backward transform matches the map identities") {
  for (Situation s : {Situation::kII, Situation::kV}) {
    const CounterexampleModel m = buildCounterexample(s);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      const auto [tlo, thi] = m.tRange();
      const auto [elo, ehi] = m.eRange();
      const double t1 = rng.uniform(tlo * 0.8, thi * 0.8);
      const double e2 = rng.uniform(elo * 0.8, ehi * 0.8);
      const auto [z2, e1] = backwardTransform(m, t1, e2);
      CHECK(z2 == doctest::Approx(m.h(t1) + e2));
      CHECK(e1 == doctest::Approx(t1 - m.h1(z2)));
    }
  }
}

TEST_CASE("disturbance-pair jacobian has unit magnitude") {
  for (Situation s : {Situation::kII, Situation::kV}) {
    const CounterexampleModel m = buildCounterexample(s);
    Rng rng(17);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      const auto [tlo, thi] = m.tRange();
      const auto [elo, ehi] = m.eRange();
      const double t1 = rng.uniform(tlo * 0.7, thi * 0.7);
      const double e2 = rng.uniform(elo * 0.7, ehi * 0.7);
      const auto [zp, ep] = backwardTransform(m, t1 + h, e2);
      const auto [zm, em] = backwardTransform(m, t1 - h, e2);
      const auto [zq, eq] = backwardTransform(m, t1, e2 + h);
      const auto [zr, er] = backwardTransform(m, t1, e2 - h);
      const double a = (zp - zm) / (2 * h), b = (zq - zr) / (2 * h);
      const double c = (ep - em) / (2 * h), d = (eq - er) / (2 * h);
      worst = std::max(worst, std::fabs(std::fabs(a * d - b * c) - 1.0));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("observation applies the two maps to the latent columns") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  const std::vector<double> t1{-0.5, 0.0, 0.8};
  const std::vector<double> e2{0.2, -0.1, 0.4};
  const PairDataset d = observePair(m, t1, e2);
  REQUIRE(d.n() == 3);
  CHECK(d.hasLatent());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.x1[i] == doctest::Approx(m.g2()(t1[i])));
    CHECK(d.x2[i] == doctest::Approx(m.f2()(d.z2[i])));
    CHECK(d.z2[i] == doctest::Approx(m.h(t1[i]) + e2[i]));
  }
  CHECK_THROWS_AS(observePair(m, t1, {0.0}), PreconditionError);
}

TEST_CASE("sampling is reproducible and centered") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  const PairDataset a = samplePair(m, 500, 11);
  const PairDataset b = samplePair(m, 500, 11);
  const PairDataset c = samplePair(m, 500, 12);
  CHECK(a.x1 == b.x1);
  CHECK(a.x2 == b.x2);
  CHECK(a.x1 != c.x1);
  CHECK(mean(a.t1) == doctest::Approx(0.0).epsilon(0.2));
  CHECK_THROWS_AS(samplePair(m, 0, 1), PreconditionError);
}

TEST_CASE("pair dataset csv round trips exactly") {
  const CounterexampleModel m = buildCounterexample(Situation::kV);
  const PairDataset d = samplePair(m, 64, 3);
  std::ostringstream out;
  d.writeCsv(out);
  std::istringstream in(out.str());
  const PairDataset back = PairDataset::readCsv(in);
  REQUIRE(back.n() == d.n());
  CHECK(back.hasLatent());
  CHECK(back.x1 == d.x1);
  CHECK(back.x2 == d.x2);
  CHECK(back.e1 == d.e1);
  std::ostringstream obsOnly;
  PairDataset obs;
  obs.x1 = d.x1;
  obs.x2 = d.x2;
  obs.writeCsv(obsOnly);
  std::istringstream in2(obsOnly.str());
  const PairDataset back2 = PairDataset::readCsv(in2);
  CHECK_FALSE(back2.hasLatent());
  CHECK(back2.x2 == d.x2);
}

TEST_CASE("identity residual refuses a fully skipped grid") {
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  CHECK_THROWS_AS(theorem1Residual(m, {}, {}), DegenerateInputError);
  CHECK_THROWS_AS(theorem1Residual(m, {0.0}, {0.0}, 1e300),
                  DegenerateInputError);
}

TEST_CASE("evenly spaced grid helper covers both endpoints") {
  const auto g = linspace(-1.0, 2.0, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == doctest::Approx(-1.0));
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK(g[2] - g[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), PreconditionError);
}

TEST_CASE("latent backward columns are exactly independent in law") {
  // Large-sample statistical check through the generated columns.
  const CounterexampleModel m = buildCounterexample(Situation::kII);
  const PairDataset d = samplePair(m, 1500, 42);
  const auto fwd = hsicTest(d.t1, d.e2, 0.05, {}, 1);
  const auto bwd = hsicTest(d.z2, d.e1, 0.05, {}, 1);
  CHECK(fwd.independent);
  CHECK(bwd.independent);
}

}  // namespace
