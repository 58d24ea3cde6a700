#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pnl/csv.hpp"
#include "pnl/errors.hpp"
#include "pnl/ode.hpp"

namespace {

using namespace pnl;

TEST_CASE("anchor conditions follow the coupling constants") {
  Sol1Params p;
  CHECK(p.pinnedEta2pp0() == doctest::Approx(-1.0));
  CHECK(p.effectiveEta1pp0() == doctest::Approx(-9.0));
  p.eta2p0 = 0.5;
  CHECK(p.pinnedEta2pp0() == doctest::Approx(-(2.0 + 0.4 * 0.5) / 2.0));
  p.eta1pp0 = -4.0;
  CHECK(p.effectiveEta1pp0() == doctest::Approx(-4.0));
}

TEST_CASE("parameter validation rejects inconsistent settings") {
  auto withBad = [](auto mutate) {
    Sol1Params p;
    mutate(p);
    return p;
  };
  CHECK_NOTHROW(Sol1Params{}.validate());
  CHECK_THROWS_AS(withBad([](Sol1Params& p) { p.a3 = 0.1; }).validate(),
                  ConstructionError);
  CHECK_THROWS_AS(withBad([](Sol1Params& p) { p.a4 = 0.0; }).validate(),
                  ConstructionError);
  CHECK_THROWS_AS(withBad([](Sol1Params& p) { p.hp0 = 0.0; }).validate(),
                  ConstructionError);
  CHECK_THROWS_AS(withBad([](Sol1Params& p) { p.step = 0.0; }).validate(),
                  ConstructionError);
  CHECK_THROWS_AS(withBad([](Sol1Params& p) { p.t_lo = 1.0; }).validate(),
                  ConstructionError);
  CHECK_THROWS_AS(withBad([](Sol1Params& p) { p.e_hi = -1.0; }).validate(),
                  ConstructionError);
}

TEST_CASE("default solve keeps the conserved combinations flat") {
  Sol1Params p;
  const Situation5Solution sol = solveSituation5(p);
  CHECK(consistencyResidual(sol, p) < 1e-6);
}

TEST_CASE("integrator error contracts at fourth order") {
  Sol1Params coarse, mid, fine;
  coarse.step = 4e-3;
  mid.step = 2e-3;
  fine.step = 1e-3;
  const auto s4 = solveSituation5(coarse);
  const auto s2 = solveSituation5(mid);
  const auto s1 = solveSituation5(fine);
  // Node-aligned points so interpolation is exact.
  const double d1 = std::fabs(s4.hp(1.0) - s2.hp(1.0));
  const double d2 = std::fabs(s2.hp(1.0) - s1.hp(1.0));
  CHECK(d1 / d2 == doctest::Approx(16.0).epsilon(0.25));
  const double c1 = std::fabs(s4.eta1pp(1.0) - s2.eta1pp(1.0));
  const double c2 = std::fabs(s2.eta1pp(1.0) - s1.eta1pp(1.0));
  CHECK(c1 / c2 == doctest::Approx(16.0).epsilon(0.25));
  const double r2 = consistencyResidual(s2, mid);
  const double r1 = consistencyResidual(s1, fine);
  CHECK(r2 / r1 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("third derivatives agree with differentiated grids") {
  Sol1Params p;
  const Situation5Solution sol = solveSituation5(p);
  // The finite difference runs over interpolated grid values, so it carries
  // interpolation noise on top of the O(h^2) truncation term.
  const double h = 1e-3;
  for (double t : {-1.5, -0.25, 0.5, 2.0}) {
    const double fd = (sol.eta1pp(t + h) - sol.eta1pp(t - h)) / (2 * h);
    CHECK(sol.eta1ppp(t, p) == doctest::Approx(fd).epsilon(1e-3));
    const double fdh = (sol.hpp(t + h) - sol.hpp(t - h)) / (2 * h);
    CHECK(sol.hppp(t, p) == doctest::Approx(fdh).epsilon(1e-3));
  }
  for (double e : {-10.0, -2.0, 3.0, 15.0}) {
    const double fd = (sol.eta2pp(e + h) - sol.eta2pp(e - h)) / (2 * h);
    CHECK(sol.eta2ppp(e, p) == doctest::Approx(fd).epsilon(1e-3));
  }
}

TEST_CASE("inner-map slope decays across the forward range") {
  Sol1Params p;
  const Situation5Solution sol = solveSituation5(p);
  CHECK(sol.hp(0.0) == doctest::Approx(3.0));
  CHECK(sol.hp(p.t_hi) / sol.hp(0.0) < 0.05);
  for (double t : {-2.0, -1.0, 0.0, 2.0, 4.0, 6.0}) CHECK(sol.hp(t) > 0.0);
}

TEST_CASE("runaway initial curvature reports where it diverged") {
  Sol1Params p;
  p.hpp0 = -20.0;
  CHECK_THROWS_AS(solveSituation5(p), DivergenceError);
  try {
    solveSituation5(p);
  } catch (const DivergenceError& e) {
    CHECK(std::fabs(e.location) < 2.0);
  }
}

TEST_CASE("grid export writes parseable full-precision csv") {
  Sol1Params p;
  p.step = 1e-2;
  const Situation5Solution sol = solveSituation5(p);
  std::ostringstream t_side, e_side;
  exportCsv(sol, t_side, e_side);
  std::istringstream tin(t_side.str()), ein(e_side.str());
  const CsvTable t = readCsv(tin);
  const CsvTable e = readCsv(ein);
  REQUIRE(t.hasColumn("t"));
  REQUIRE(e.hasColumn("e"));
  CHECK(t.rows() == sol.h.size());
  CHECK(e.rows() == sol.eta2.size());
  const auto& ts = t.column("t");
  const auto& hs = t.column("h");
  for (std::size_t i = 0; i < ts.size(); i += 97)
    CHECK(hs[i] == sol.h.values[i]);
}

}  // namespace
