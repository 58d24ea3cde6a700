#ifndef PNL_ODE_HPP
#define PNL_ODE_HPP

#include <iosfwd>
#include <optional>

#include "pnl/grid_function.hpp"

namespace pnl {

// Parameters of the coupled third-order closure that generates the
// smooth non-identifiable construction. The two sides share coupling
// constants a1..a4; the differential system is
//   eta1''' = eta1''*h''/h' + a1*h'*h'' + a2*h'*eta1''
//   h'''    = h''^2/h'     + a3*h'*h'' + a4*h'*eta1''     (in t)
//   eta2''' = -eta2''*(a2 - a4*eta2')                     (in e)
// with eta2''(0) pinned to -(a1 - a3*eta2p0)/2 so the cross-equation
// couplings agree at the anchor.
struct Sol1Params {
  double a1 = 2.0;
  double a2 = 0.4;
  double a3 = -0.4;
  double a4 = 1.0;

  double eta1p0 = 0.0;   // eta1'(0)
  double eta2p0 = 0.0;   // eta2'(0)
  double hp0 = 3.0;      // h'(0)
  double hpp0 = 0.0;     // h''(0)
  // eta1''(0); defaults to eta2''(0)*h'(0)^2 when unset.
  std::optional<double> eta1pp0;

  double h0 = 0.0;       // h(0)
  double eta1_0 = 0.0;   // additive anchor, later replaced by normalization
  double eta2_0 = 0.0;

  double t_lo = -2.0, t_hi = 6.0;
  double e_lo = -18.0, e_hi = 24.0;
  double step = 1e-3;

  double pinnedEta2pp0() const { return -(a1 - a3 * eta2p0) / 2.0; }
  double effectiveEta1pp0() const {
    return eta1pp0 ? *eta1pp0 : pinnedEta2pp0() * hp0 * hp0;
  }

  // ConstructionError unless a3 == -a2, a4 != 0, h'(0) != 0, step > 0 and
  // both ranges contain 0.
  void validate() const;
};

// Solution grids of the closure. The t side carries log-density derivatives
// of the cause disturbance and the inner map h; the e side carries the
// effect disturbance log-density derivatives.
struct Situation5Solution {
  GridFunction eta1, eta1p, eta1pp;
  GridFunction h, hp, hpp;
  GridFunction eta2, eta2p, eta2pp;

  // Third derivatives from the closure's right-hand sides.
  double eta1ppp(double t, const Sol1Params& p) const;
  double hppp(double t, const Sol1Params& p) const;
  double eta2ppp(double e, const Sol1Params& p) const;
};

// Integrates the closure with classic fourth-order Runge-Kutta at the
// requested step, outward from 0 in both directions. h' crossing zero raises
// SingularityError with the crossing location; a non-finite state raises
// DivergenceError.
Situation5Solution solveSituation5(const Sol1Params& params);

// Largest deviation of the solution from the closure's algebraic structure:
// on the e side the pinned combination eta2'*eta2'''/eta2'' - 2*eta2''
// minus (a1 - a3*eta2'), and on the t side the drift of the two conserved
// quantities eta1''/h' - a1*h' - a2*eta1' and h''/h' - a3*h' - a4*eta1'.
// For an exact solution all three vanish identically, so the value measures
// pure integration error.
double consistencyResidual(const Situation5Solution& sol,
                           const Sol1Params& params);

// Writes the t-side and e-side grids as CSV (17 significant digits).
void exportCsv(const Situation5Solution& sol, std::ostream& t_side,
               std::ostream& e_side);

}  // namespace pnl

#endif  // PNL_ODE_HPP
