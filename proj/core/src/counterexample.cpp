#include "pnl/counterexample.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <utility>

#include "json.hpp"
#include "pnl/csv.hpp"
#include "pnl/errors.hpp"
#include "pnl/rng.hpp"

namespace pnl {

namespace {

std::string fmtNum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double logAddExp(double a, double b) {
  double hi = std::max(a, b), lo = std::min(a, b);
  if (!std::isfinite(hi)) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

double backwardSlopeRatio(const DensitySpec& pe, double eta1pp0, double hp0,
                          double hpp0, double e, double z) {
  LogDensityDerivs d = pe.logPdfDerivs(e);
  double den = eta1pp0 + d.d2 * hp0 * hp0 - d.d1 * hpp0;
  if (den == 0.0 || !std::isfinite(den)) {
    throw SingularityError("backward slope denominator vanished", z);
  }
  return d.d2 * hp0 / den;
}

ObservationMap defaultG2(Situation s) {
  switch (s) {
    case Situation::kI:
      return ObservationMap(ObservationMap::Kind::kIdentity);
    case Situation::kII:
      return ObservationMap(ObservationMap::Kind::kHalfPlusCbrt);
    case Situation::kV:
      return ObservationMap(ObservationMap::Kind::kCubePlusLinear, 1.0);
  }
  return ObservationMap(ObservationMap::Kind::kIdentity);
}

ObservationMap defaultF2(Situation s) {
  switch (s) {
    case Situation::kI:
      return ObservationMap(ObservationMap::Kind::kIdentity);
    case Situation::kII:
      return ObservationMap(ObservationMap::Kind::kTanhScaled, 8.0);
    case Situation::kV:
      return ObservationMap(ObservationMap::Kind::kLogShifted, 6.0);
  }
  return ObservationMap(ObservationMap::Kind::kIdentity);
}

}  // namespace

std::string situationName(Situation s) {
  switch (s) {
    case Situation::kI: return "I";
    case Situation::kII: return "II";
    case Situation::kV: return "V";
  }
  return "?";
}

std::optional<Situation> situationFromName(const std::string& name) {
  std::string t;
  for (char c : name) {
    t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (t == "i") return Situation::kI;
  if (t == "ii") return Situation::kII;
  if (t == "v") return Situation::kV;
  return std::nullopt;
}

ObservationMap::ObservationMap(Kind kind, double a, double b)
    : kind_(kind), a_(a), b_(b) {
  switch (kind_) {
    case Kind::kIdentity:
    case Kind::kHalfPlusCbrt:
      a_ = 1.0;
      b_ = 0.0;
      break;
    case Kind::kLinear:
      if (!std::isfinite(a_) || !std::isfinite(b_) || a_ == 0.0) {
        throw ConstructionError("linear map needs a finite nonzero slope");
      }
      break;
    case Kind::kCubePlusLinear:
      if (!std::isfinite(a_) || a_ < 0.0) {
        throw ConstructionError("cube_plus_linear map needs a >= 0");
      }
      b_ = 0.0;
      break;
    case Kind::kTanhScaled:
      if (!std::isfinite(a_) || a_ <= 0.0) {
        throw ConstructionError("tanh_scaled map needs a positive scale");
      }
      b_ = 0.0;
      break;
    case Kind::kLogShifted:
      if (!std::isfinite(a_)) {
        throw ConstructionError("log_shifted map needs a finite offset");
      }
      b_ = 0.0;
      break;
  }
}

double ObservationMap::operator()(double v) const {
  switch (kind_) {
    case Kind::kIdentity:
      return v;
    case Kind::kLinear:
      return a_ * v + b_;
    case Kind::kHalfPlusCbrt:
      return 0.5 * v + std::cbrt(v);
    case Kind::kCubePlusLinear:
      return v + a_ * v * v * v;
    case Kind::kTanhScaled:
      return std::tanh(v / a_);
    case Kind::kLogShifted:
      if (!(v + a_ > 0.0)) {
        throw DomainError("log_shifted map undefined at v = " + fmtNum(v) +
                          " (requires v > " + fmtNum(-a_) + ")");
      }
      return std::log(v + a_);
  }
  return v;
}

double ObservationMap::inverse(double y) const {
  switch (kind_) {
    case Kind::kIdentity:
      return y;
    case Kind::kLinear:
      return (y - b_) / a_;
    case Kind::kHalfPlusCbrt: {
      double r = 2.0 * std::abs(y) + 2.0;
      return invertMonotone([](double v) { return 0.5 * v + std::cbrt(v); }, y,
                            -r, r);
    }
    case Kind::kCubePlusLinear: {
      double r = std::abs(y) + 1.0;
      double a = a_;
      return invertMonotone([a](double v) { return v + a * v * v * v; }, y, -r,
                            r);
    }
    case Kind::kTanhScaled:
      if (!(y > -1.0 && y < 1.0)) {
        throw DomainError("tanh_scaled map has no preimage of y = " +
                          fmtNum(y));
      }
      return a_ * std::atanh(y);
    case Kind::kLogShifted:
      return std::exp(y) - a_;
  }
  return y;
}

bool ObservationMap::increasing() const {
  if (kind_ == Kind::kLinear) return a_ > 0.0;
  return true;
}

std::string ObservationMap::name() const {
  switch (kind_) {
    case Kind::kIdentity: return "identity";
    case Kind::kLinear: return "linear";
    case Kind::kHalfPlusCbrt: return "half_plus_cbrt";
    case Kind::kCubePlusLinear: return "cube_plus_linear";
    case Kind::kTanhScaled: return "tanh_scaled";
    case Kind::kLogShifted: return "log_shifted";
  }
  return "identity";
}

std::string ObservationMap::toJsonText() const {
  nlohmann::json j;
  j["kind"] = name();
  j["a"] = a_;
  j["b"] = b_;
  return j.dump();
}

ObservationMap ObservationMap::fromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("observation map JSON: ") + e.what());
  }
  try {
    std::string kind = j.at("kind").get<std::string>();
    double a = j.value("a", 1.0);
    double b = j.value("b", 0.0);
    if (kind == "identity") return ObservationMap(Kind::kIdentity);
    if (kind == "linear") return ObservationMap(Kind::kLinear, a, b);
    if (kind == "half_plus_cbrt") return ObservationMap(Kind::kHalfPlusCbrt);
    if (kind == "cube_plus_linear") {
      return ObservationMap(Kind::kCubePlusLinear, a);
    }
    if (kind == "tanh_scaled") return ObservationMap(Kind::kTanhScaled, a);
    if (kind == "log_shifted") return ObservationMap(Kind::kLogShifted, a);
    throw ConstructionError("observation map JSON: unknown kind '" + kind +
                            "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("observation map JSON: ") + e.what());
  }
}

struct CounterexampleModel::Builder {
  static void situationI(CounterexampleModel& m,
                         const CounterexampleConfig& config) {
    if (!std::isfinite(config.lin_slope) || config.lin_slope == 0.0) {
      throw ConstructionError("Situation I needs a finite nonzero slope");
    }
    m.p_t1_ = DensitySpec::gaussian(0.0, 1.0).normalized();
    m.p_e2_ = DensitySpec::gaussian(0.0, 1.0).normalized();
    m.h_linear_ = true;
    m.h_slope_ = config.lin_slope;
    m.h1_kind_ = H1Kind::kLinear;
    m.h1_slope_ =
        config.lin_slope / (1.0 + config.lin_slope * config.lin_slope);
  }

  static void situationII(CounterexampleModel& m,
                          const CounterexampleConfig& config) {
    double s = config.h_slope, c1 = config.c1, c3 = config.c3, c6 = config.c6;
    for (double v : {s, c1, config.c2, c3, config.c5, c6, config.c8}) {
      if (!std::isfinite(v)) {
        throw ConstructionError("Situation II constants must be finite");
      }
    }
    if (s == 0.0 || c1 == 0.0) {
      throw ConstructionError("Situation II needs nonzero h slope and c1");
    }
    if (!(c1 * c3 > 0.0)) {
      throw ConstructionError(
          "Situation II needs c1*c3 > 0 for a valid effect density");
    }
    double hc = -s * c1;
    if (!(hc * c6 > 0.0)) {
      throw ConstructionError(
          "Situation II needs -h_slope*c1*c6 > 0 for a valid cause density");
    }

    DensitySpec pe =
        DensitySpec::logMixLinExp(-std::exp(config.c2) / (c1 * c1), c1, c3, 0.0);
    DensitySpec pt =
        DensitySpec::logMixLinExp(-std::exp(config.c5) / (hc * hc), hc, c6, 0.0);
    if (config.center) {
      pe = pe.translated(-pe.numericMean());
      pt = pt.translated(-pt.numericMean());
    }
    m.p_e2_ = pe.normalized();
    m.p_t1_ = pt.normalized();
    m.h_linear_ = true;
    m.h_slope_ = s;

    // Centering rescales the double-exponential coefficients; read the
    // integration constants back so the closed-form h1 matches the final
    // densities.
    double c2c =
        std::log(-m.p_e2_.logMixLinExpParams().c1) + 2.0 * std::log(std::abs(c1));
    double c5c =
        std::log(-m.p_t1_.logMixLinExpParams().c1) + 2.0 * std::log(std::abs(hc));
    m.h1_kind_ = H1Kind::kClosedForm;
    m.h1_c1_ = c1;
    m.h1_hprime_ = s;
    m.h1_k_ = c2c - c5c;
    m.h1_c8_ = config.c8;
  }

  static void situationV(CounterexampleModel& m,
                         const CounterexampleConfig& config) {
    const Sol1Params& P = config.ode;
    P.validate();

    double s2 = P.a2 * P.a2 + P.a1 * P.a4;
    if (!(s2 > 0.0)) {
      throw ConstructionError(
          "Situation V needs a2^2 + a1*a4 > 0 for exponential tails");
    }
    double sr = std::sqrt(s2);
    double rp = (P.a2 + sr) / P.a4;
    double rm = (P.a2 - sr) / P.a4;
    double w0 = (rp - P.eta2p0) / (rp - rm);
    if (!(w0 > 0.0 && w0 < 1.0)) {
      throw ConstructionError(
          "Situation V needs eta2'(0) strictly between the tail slopes " +
          fmtNum(rm) + " and " + fmtNum(rp));
    }
    DensitySpec pe =
        DensitySpec::genMixTwoExp(rp, -2.0 / P.a4, 1.0 - w0, w0, sr, 0.0);
    double curv0 = (-2.0 / P.a4) * s2 * w0 * (1.0 - w0);
    if (!(curv0 < 0.0)) {
      throw ConstructionError(
          "Situation V effect log-density must be concave at 0");
    }

    Situation5Solution sol = solveSituation5(P);

    double mu1 = 0.0, mu2 = 0.0;
    if (config.center) {
      mu2 = pe.numericMean();
      mu1 = DensitySpec::tabulated(sol.eta1).numericMean();
    }
    pe = pe.translated(-mu2);
    for (GridFunction* g : {&sol.eta2, &sol.eta2p, &sol.eta2pp}) g->x0 -= mu2;
    double hmu = hermiteValue(sol.h, sol.hp, mu1);
    for (double& v : sol.h.values) v -= hmu;
    for (GridFunction* g :
         {&sol.eta1, &sol.eta1p, &sol.eta1pp, &sol.h, &sol.hp, &sol.hpp}) {
      g->x0 -= mu1;
    }

    m.p_e2_ =
        pe.withRange(sol.eta2.x0, sol.eta2.xMax(), config.grid_points).normalized();
    m.p_t1_ = DensitySpec::tabulated(sol.eta1).normalized();

    std::vector<double> e3(sol.eta1pp.size()), h3(sol.h.size());
    for (std::size_t i = 0; i < e3.size(); ++i) {
      double hp = sol.hp.values[i], hpp = sol.hpp.values[i];
      double e1pp = sol.eta1pp.values[i];
      e3[i] = e1pp * hpp / hp + P.a1 * hp * hpp + P.a2 * hp * e1pp;
      h3[i] = hpp * hpp / hp + P.a3 * hp * hpp + P.a4 * hp * e1pp;
    }
    m.eta1ppp_grid_ = GridFunction(sol.eta1pp.x0, sol.eta1pp.dx, std::move(e3));
    m.hppp_grid_ = GridFunction(sol.h.x0, sol.h.dx, std::move(h3));

    m.h_linear_ = false;
    m.h_grid_ = sol.h;
    m.hp_grid_ = sol.hp;
    m.hpp_grid_ = sol.hpp;
    m.ode_params_ = P;
    m.ode_ = std::move(sol);

    // Backward inner map: the cross-derivative ratio anchored at t = 0,
    // tabulated over every reachable z = h(t) + e and integrated from 0.
    m.ratio_h0_ = hermiteValue(m.h_grid_, m.hp_grid_, 0.0);
    m.ratio_hp0_ = hermiteValue(m.hp_grid_, m.hpp_grid_, 0.0);
    m.ratio_hpp0_ = hermiteValue(m.hpp_grid_, m.hppp_grid_, 0.0);
    m.ratio_eta1pp0_ = hermiteValue(m.ode_->eta1pp, m.eta1ppp_grid_, 0.0);

    double eLo = m.ode_->eta2.x0, eHi = m.ode_->eta2.xMax();
    auto [hMin, hMax] =
        std::minmax(m.h_grid_.values.front(), m.h_grid_.values.back());
    double zLo = hMin + eLo, zHi = hMax + eHi;
    double step = P.step;
    auto k = static_cast<long>(std::ceil(-zLo / step - 1e-9));
    double x0 = -static_cast<double>(k) * step;
    if (x0 > zLo) x0 -= step;
    auto nz = static_cast<long>(std::ceil((zHi - x0) / step)) + 1;
    if (nz < 5 || nz > 50'000'000) {
      throw ConstructionError("Situation V backward grid size out of range");
    }

    std::vector<double> h1p(static_cast<std::size_t>(nz));
    for (long j = 0; j < nz; ++j) {
      double z = x0 + static_cast<double>(j) * step;
      h1p[static_cast<std::size_t>(j)] =
          backwardSlopeRatio(m.p_e2_, m.ratio_eta1pp0_, m.ratio_hp0_,
                             m.ratio_hpp0_, z - m.ratio_h0_, z);
    }
    GridFunction h1pg(x0, step, std::move(h1p));
    m.h1_grid_ = h1pg.cumulativeTrapezoid(0.0, 0.0);
    double v0 = hermiteValue(m.h1_grid_, h1pg, 0.0);
    for (double& v : m.h1_grid_.values) v -= v0;
    m.h1p_grid_ = std::move(h1pg);
    m.h1_kind_ = H1Kind::kGrid;
  }
};

CounterexampleModel buildCounterexample(Situation situation,
                                        const CounterexampleConfig& config) {
  CounterexampleModel m;
  m.situation_ = situation;
  switch (situation) {
    case Situation::kI:
      CounterexampleModel::Builder::situationI(m, config);
      break;
    case Situation::kII:
      CounterexampleModel::Builder::situationII(m, config);
      break;
    case Situation::kV:
      CounterexampleModel::Builder::situationV(m, config);
      break;
  }
  m.g2_ = config.g2 ? *config.g2 : defaultG2(situation);
  m.f2_ = config.f2 ? *config.f2 : defaultF2(situation);
  return m;
}

double CounterexampleModel::h(double t) const {
  if (h_linear_) return h_slope_ * t;
  return hermiteValue(h_grid_, hp_grid_, t);
}

double CounterexampleModel::hp(double t) const {
  if (h_linear_) return h_slope_;
  return hermiteValue(hp_grid_, hpp_grid_, t);
}

double CounterexampleModel::hpp(double t) const {
  if (h_linear_) return 0.0;
  return hermiteValue(hpp_grid_, hppp_grid_, t);
}

double CounterexampleModel::hppp(double t) const {
  if (h_linear_) return 0.0;
  double vhp = hp(t), vhpp = hpp(t);
  double e1pp = hermiteValue(ode_->eta1pp, eta1ppp_grid_, t);
  return vhpp * vhpp / vhp + ode_params_.a3 * vhp * vhpp +
         ode_params_.a4 * vhp * e1pp;
}

double CounterexampleModel::h1(double z) const {
  switch (h1_kind_) {
    case H1Kind::kLinear:
      return h1_slope_ * z;
    case H1Kind::kClosedForm: {
      double la = std::log(std::abs(h1_hprime_));
      double arg = logAddExp(h1_c1_ * z + h1_k_, -2.0 * la);
      return (arg + la) / (h1_hprime_ * h1_c1_) + h1_c8_;
    }
    case H1Kind::kGrid:
      return hermiteValue(h1_grid_, h1p_grid_, z);
  }
  return 0.0;
}

double CounterexampleModel::h1p(double z) const {
  switch (h1_kind_) {
    case H1Kind::kLinear:
      return h1_slope_;
    case H1Kind::kClosedForm:
      return 1.0 / (std::exp(-(h1_c1_ * z + h1_k_)) / h1_hprime_ + h1_hprime_);
    case H1Kind::kGrid:
      return backwardSlopeRatio(p_e2_, ratio_eta1pp0_, ratio_hp0_,
                                ratio_hpp0_, z - ratio_h0_, z);
  }
  return 0.0;
}

LogDensityDerivs CounterexampleModel::eta1Derivs(double t) const {
  if (situation_ != Situation::kV) return p_t1_.logPdfDerivs(t);
  LogDensityDerivs d;
  d.value = hermiteValue(ode_->eta1, ode_->eta1p, t) + p_t1_.shift();
  d.d1 = hermiteValue(ode_->eta1p, ode_->eta1pp, t);
  d.d2 = hermiteValue(ode_->eta1pp, eta1ppp_grid_, t);
  double vhp = hp(t), vhpp = hpp(t);
  d.d3 = d.d2 * vhpp / vhp + ode_params_.a1 * vhp * vhpp +
         ode_params_.a2 * vhp * d.d2;
  return d;
}

LogDensityDerivs CounterexampleModel::eta2Derivs(double e) const {
  return p_e2_.logPdfDerivs(e);
}

std::pair<double, double> CounterexampleModel::tRange() const {
  return p_t1_.tabulationRange();
}

std::pair<double, double> CounterexampleModel::eRange() const {
  return p_e2_.tabulationRange();
}

std::pair<double, double> CounterexampleModel::zRange() const {
  if (h1_kind_ == H1Kind::kGrid) return {h1_grid_.x0, h1_grid_.xMax()};
  auto [tlo, thi] = tRange();
  auto [elo, ehi] = eRange();
  double a = h_slope_ * tlo, b = h_slope_ * thi;
  if (a > b) std::swap(a, b);
  return {a + elo, b + ehi};
}

GridFunction computeH1(const CounterexampleModel& model, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw PreconditionError("computeH1: step must be positive");
  }
  auto [zlo, zhi] = model.zRange();
  bool anchored = zlo <= 0.0 && zhi >= 0.0;
  double x0 = zlo;
  if (anchored) {
    auto k = static_cast<long>(std::ceil(-zlo / step - 1e-9));
    x0 = -static_cast<double>(k) * step;
    if (x0 > zlo) x0 -= step;
  }
  auto n = static_cast<long>(std::ceil((zhi - x0) / step)) + 1;
  if (n < 2) n = 2;
  if (n > 50'000'000) throw CapError("computeH1: grid would exceed the node cap");
  std::vector<double> slopes(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    slopes[static_cast<std::size_t>(j)] =
        model.h1p(x0 + static_cast<double>(j) * step);
  }
  GridFunction sg(x0, step, std::move(slopes));
  double anchor = anchored ? 0.0 : x0;
  GridFunction out = sg.cumulativeTrapezoid(anchor, 0.0);
  double v0 = hermiteValue(out, sg, anchor);
  for (double& v : out.values) v -= v0;
  return out;
}

std::pair<double, double> backwardTransform(const CounterexampleModel& model,
                                            double t1, double e2) {
  double z2 = model.h(t1) + e2;
  double e1 = t1 - model.h1(z2);
  return {z2, e1};
}

PairDataset observePair(const CounterexampleModel& model,
                        const std::vector<double>& t1,
                        const std::vector<double>& e2) {
  if (t1.size() != e2.size()) {
    throw PreconditionError("observePair: disturbance columns differ in length");
  }
  PairDataset d;
  d.x1.reserve(t1.size());
  d.x2.reserve(t1.size());
  d.t1 = t1;
  d.e2 = e2;
  d.z2.reserve(t1.size());
  d.e1.reserve(t1.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    auto [z2, e1] = backwardTransform(model, t1[i], e2[i]);
    d.z2.push_back(z2);
    d.e1.push_back(e1);
    d.x1.push_back(model.g2()(t1[i]));
    d.x2.push_back(model.f2()(z2));
  }
  return d;
}

PairDataset samplePair(const CounterexampleModel& model, int n,
                       std::uint64_t seed) {
  if (n < 1) throw PreconditionError("samplePair: need at least one row");
  Rng rt = Rng::forStream(seed, "t1");
  Rng re = Rng::forStream(seed, "e2");
  PairDataset d = observePair(model, model.pT1().sample(n, rt),
                              model.pE2().sample(n, re));
  d.seed = seed;
  return d;
}

void PairDataset::writeCsv(std::ostream& out) const {
  CsvTable t;
  t.headers = {"x1", "x2"};
  t.columns = {x1, x2};
  if (hasLatent()) {
    t.headers.insert(t.headers.end(), {"t1", "e2", "z2", "e1"});
    t.columns.insert(t.columns.end(), {t1, e2, z2, e1});
  }
  pnl::writeCsv(out, t);
}

PairDataset PairDataset::readCsv(std::istream& in) {
  CsvTable t = pnl::readCsv(in);
  PairDataset d;
  d.x1 = t.column("x1");
  d.x2 = t.column("x2");
  if (t.hasColumn("t1")) {
    d.t1 = t.column("t1");
    d.e2 = t.column("e2");
    d.z2 = t.column("z2");
    d.e1 = t.column("e1");
  }
  return d;
}

Theorem1Residual theorem1Residual(const CounterexampleModel& model,
                                  const std::vector<double>& t_grid,
                                  const std::vector<double>& e_grid,
                                  double skip_tol) {
  Theorem1Residual r;
  struct TSide {
    double h, hp, hpp, e1pp, phi1, phi2, phi3, phi4;
  };
  std::vector<TSide> ts;
  ts.reserve(t_grid.size());
  for (double t : t_grid) {
    LogDensityDerivs d = model.eta1Derivs(t);
    TSide s;
    s.h = model.h(t);
    s.hp = model.hp(t);
    s.hpp = model.hpp(t);
    s.e1pp = d.d2;
    if (s.hp != 0.0) {
      s.phi1 = d.d3 - d.d2 * s.hpp / s.hp;
      s.phi2 = model.hppp(t) - s.hpp * s.hpp / s.hp;
    } else {
      s.phi1 = s.phi2 = 0.0;
    }
    s.phi3 = s.hp * s.hpp;
    s.phi4 = s.hp * d.d2;
    ts.push_back(s);
  }
  for (const TSide& s : ts) {
    for (double e : e_grid) {
      LogDensityDerivs d = model.eta2Derivs(e);
      if (!(std::abs(d.d2 * s.hp) > skip_tol)) {
        ++r.skipped;
        continue;
      }
      double rhs = (d.d1 * d.d3 / d.d2 - 2.0 * d.d2) * s.phi3 -
                   (d.d3 / d.d2) * s.phi4 + d.d1 * s.phi2;
      r.max_eq4 = std::max(r.max_eq4, std::abs(s.phi1 - rhs));
      double den = s.e1pp + d.d2 * s.hp * s.hp - d.d1 * s.hpp;
      if (den != 0.0 && std::isfinite(den)) {
        double ratio = d.d2 * s.hp / den;
        r.max_eq5 = std::max(r.max_eq5, std::abs(model.h1p(s.h + e) - ratio));
      }
      ++r.evaluated;
    }
  }
  if (r.evaluated == 0) {
    throw DegenerateInputError("theorem1Residual: every grid point was skipped");
  }
  return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw PreconditionError("linspace: need at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(n));
  double d = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + i * d;
  v.back() = hi;
  return v;
}

}  // namespace pnl
