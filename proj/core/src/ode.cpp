#include "pnl/ode.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pnl/errors.hpp"

namespace pnl {

namespace {

// State on the t side: (eta1', eta1'', h', h'').
using TState = std::array<double, 4>;
// State on the e side: (eta2', eta2'').
using EState = std::array<double, 2>;

TState tRhs(const TState& y, const Sol1Params& p) {
  const double e1pp = y[1], hp = y[2], hpp = y[3];
  double e1ppp = e1pp * hpp / hp + p.a1 * hp * hpp + p.a2 * hp * e1pp;
  double hppp = hpp * hpp / hp + p.a3 * hp * hpp + p.a4 * hp * e1pp;
  return {e1pp, e1ppp, hpp, hppp};
}

EState eRhs(const EState& y, const Sol1Params& p) {
  double e2ppp = -y[1] * (p.a2 - p.a4 * y[0]);
  return {y[1], e2ppp};
}

template <class State, class Rhs>
State rk4Step(const State& y, double dt, const Rhs& rhs) {
  State k1 = rhs(y);
  State y2, y3, y4;
  for (std::size_t i = 0; i < y.size(); ++i) y2[i] = y[i] + 0.5 * dt * k1[i];
  State k2 = rhs(y2);
  for (std::size_t i = 0; i < y.size(); ++i) y3[i] = y[i] + 0.5 * dt * k2[i];
  State k3 = rhs(y3);
  for (std::size_t i = 0; i < y.size(); ++i) y4[i] = y[i] + dt * k3[i];
  State k4 = rhs(y4);
  State out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

template <class State>
bool finiteState(const State& y) {
  for (double v : y) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

void Sol1Params::validate() const {
  if (std::abs(a3 + a2) > 1e-12) {
    throw ConstructionError("Sol1Params: requires a3 == -a2");
  }
  if (a4 == 0.0) throw ConstructionError("Sol1Params: requires a4 != 0");
  if (hp0 == 0.0) throw ConstructionError("Sol1Params: requires h'(0) != 0");
  if (!(step > 0.0)) throw ConstructionError("Sol1Params: step must be positive");
  if (!(t_lo < 0.0 && t_hi > 0.0)) {
    throw ConstructionError("Sol1Params: t range must contain 0");
  }
  if (!(e_lo < 0.0 && e_hi > 0.0)) {
    throw ConstructionError("Sol1Params: e range must contain 0");
  }
  for (double v : {a1, a2, a3, a4, eta1p0, eta2p0, hp0, hpp0, h0, eta1_0,
                   eta2_0, t_lo, t_hi, e_lo, e_hi, step}) {
    if (!std::isfinite(v)) {
      throw ConstructionError("Sol1Params: parameters must be finite");
    }
  }
}

Situation5Solution solveSituation5(const Sol1Params& p) {
  p.validate();
  const double dt = p.step;
  const long n_tlo = static_cast<long>(std::ceil(-p.t_lo / dt - 1e-9));
  const long n_thi = static_cast<long>(std::ceil(p.t_hi / dt - 1e-9));
  const long n_elo = static_cast<long>(std::ceil(-p.e_lo / dt - 1e-9));
  const long n_ehi = static_cast<long>(std::ceil(p.e_hi / dt - 1e-9));

  const std::size_t nt = static_cast<std::size_t>(n_tlo + n_thi + 1);
  const std::size_t ne = static_cast<std::size_t>(n_elo + n_ehi + 1);
  const double t0 = -static_cast<double>(n_tlo) * dt;
  const double e0 = -static_cast<double>(n_elo) * dt;

  std::vector<double> e1p(nt), e1pp(nt), hp(nt), hpp(nt);
  const double sign_hp = p.hp0 > 0.0 ? 1.0 : -1.0;
  TState anchor = {p.eta1p0, p.effectiveEta1pp0(), p.hp0, p.hpp0};

  auto storeT = [&](std::size_t i, const TState& y) {
    e1p[i] = y[0];
    e1pp[i] = y[1];
    hp[i] = y[2];
    hpp[i] = y[3];
  };
  auto checkT = [&](const TState& y, double t) {
    if (!finiteState(y)) {
      throw DivergenceError("solveSituation5: state diverged on the t side", t);
    }
    if (!(y[2] * sign_hp > 0.0)) {
      throw SingularityError("solveSituation5: h' crossed zero", t);
    }
  };
  auto rhsT = [&](const TState& y) { return tRhs(y, p); };

  storeT(static_cast<std::size_t>(n_tlo), anchor);
  TState y = anchor;
  for (long k = 0; k < n_thi; ++k) {
    y = rk4Step(y, dt, rhsT);
    double t = static_cast<double>(k + 1) * dt;
    checkT(y, t);
    storeT(static_cast<std::size_t>(n_tlo + k + 1), y);
  }
  y = anchor;
  for (long k = 0; k < n_tlo; ++k) {
    y = rk4Step(y, -dt, rhsT);
    double t = -static_cast<double>(k + 1) * dt;
    checkT(y, t);
    storeT(static_cast<std::size_t>(n_tlo - k - 1), y);
  }

  std::vector<double> e2p(ne), e2pp(ne);
  EState anchor_e = {p.eta2p0, p.pinnedEta2pp0()};
  auto storeE = [&](std::size_t i, const EState& z) {
    e2p[i] = z[0];
    e2pp[i] = z[1];
  };
  auto checkE = [&](const EState& z, double e) {
    if (!finiteState(z)) {
      throw DivergenceError("solveSituation5: state diverged on the e side", e);
    }
  };
  auto rhsE = [&](const EState& z) { return eRhs(z, p); };

  storeE(static_cast<std::size_t>(n_elo), anchor_e);
  EState z = anchor_e;
  for (long k = 0; k < n_ehi; ++k) {
    z = rk4Step(z, dt, rhsE);
    checkE(z, static_cast<double>(k + 1) * dt);
    storeE(static_cast<std::size_t>(n_elo + k + 1), z);
  }
  z = anchor_e;
  for (long k = 0; k < n_elo; ++k) {
    z = rk4Step(z, -dt, rhsE);
    checkE(z, -static_cast<double>(k + 1) * dt);
    storeE(static_cast<std::size_t>(n_elo - k - 1), z);
  }

  Situation5Solution sol;
  sol.eta1p = GridFunction(t0, dt, std::move(e1p));
  sol.eta1pp = GridFunction(t0, dt, std::move(e1pp));
  sol.hp = GridFunction(t0, dt, std::move(hp));
  sol.hpp = GridFunction(t0, dt, std::move(hpp));
  sol.eta1 = sol.eta1p.cumulativeTrapezoid(0.0, p.eta1_0);
  sol.h = sol.hp.cumulativeTrapezoid(0.0, p.h0);
  sol.eta2p = GridFunction(e0, dt, std::move(e2p));
  sol.eta2pp = GridFunction(e0, dt, std::move(e2pp));
  sol.eta2 = sol.eta2p.cumulativeTrapezoid(0.0, p.eta2_0);
  return sol;
}

double Situation5Solution::eta1ppp(double t, const Sol1Params& p) const {
  double e1pp = eta1pp(t), h1 = hp(t), h2 = hpp(t);
  return e1pp * h2 / h1 + p.a1 * h1 * h2 + p.a2 * h1 * e1pp;
}

double Situation5Solution::hppp(double t, const Sol1Params& p) const {
  double e1pp = eta1pp(t), h1 = hp(t), h2 = hpp(t);
  return h2 * h2 / h1 + p.a3 * h1 * h2 + p.a4 * h1 * e1pp;
}

double Situation5Solution::eta2ppp(double e, const Sol1Params& p) const {
  return -eta2pp(e) * (p.a2 - p.a4 * eta2p(e));
}

double consistencyResidual(const Situation5Solution& sol,
                           const Sol1Params& p) {
  double worst = 0.0;

  // e side: the coupling that pins eta2''(0) must propagate along the flow.
  for (std::size_t i = 0; i < sol.eta2p.size(); ++i) {
    double u = sol.eta2p.values[i];
    double v = sol.eta2pp.values[i];
    if (v == 0.0) {
      throw PreconditionError("consistencyResidual: eta2'' vanishes at a node");
    }
    double e2ppp = -v * (p.a2 - p.a4 * u);
    double resid = std::abs(u * (e2ppp / v) - 2.0 * v - (p.a1 - p.a3 * u));
    worst = std::max(worst, resid);
  }

  // t side: drift of the two first integrals of the closure.
  std::size_t i0 = sol.hp.nearestIndex(0.0);
  double hp_0 = sol.hp.values[i0];
  double c1_0 = sol.eta1pp.values[i0] / hp_0 - p.a1 * hp_0 -
                p.a2 * sol.eta1p.values[i0];
  double c2_0 = sol.hpp.values[i0] / hp_0 - p.a3 * hp_0 -
                p.a4 * sol.eta1p.values[i0];
  for (std::size_t i = 0; i < sol.hp.size(); ++i) {
    double hpv = sol.hp.values[i];
    if (hpv == 0.0) {
      throw PreconditionError("consistencyResidual: h' vanishes at a node");
    }
    double c1 = sol.eta1pp.values[i] / hpv - p.a1 * hpv -
                p.a2 * sol.eta1p.values[i];
    double c2 = sol.hpp.values[i] / hpv - p.a3 * hpv -
                p.a4 * sol.eta1p.values[i];
    worst = std::max(worst, std::abs(c1 - c1_0));
    worst = std::max(worst, std::abs(c2 - c2_0));
  }
  return worst;
}

void exportCsv(const Situation5Solution& sol, std::ostream& t_side,
               std::ostream& e_side) {
  char buf[512];
  t_side << "t,eta1,eta1p,eta1pp,h,hp,hpp\n";
  for (std::size_t i = 0; i < sol.h.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sol.h.xAt(i),
                  sol.eta1.values[i], sol.eta1p.values[i],
                  sol.eta1pp.values[i], sol.h.values[i], sol.hp.values[i],
                  sol.hpp.values[i]);
    t_side << buf;
  }
  e_side << "e,eta2,eta2p,eta2pp\n";
  for (std::size_t i = 0; i < sol.eta2.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                  sol.eta2.xAt(i), sol.eta2.values[i], sol.eta2p.values[i],
                  sol.eta2pp.values[i]);
    e_side << buf;
  }
}

}  // namespace pnl
