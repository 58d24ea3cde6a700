#ifndef PNL_COUNTEREXAMPLE_HPP
#define PNL_COUNTEREXAMPLE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pnl/density.hpp"
#include "pnl/grid_function.hpp"
#include "pnl/ode.hpp"

namespace pnl {

// Non-identifiable two-variable constructions, named by the rows of the
// reference table they instantiate: I is the linear-Gaussian case, II the
// exponential-family case with linear inner map, V the smooth construction
// from the coupled closure.
enum class Situation { kI, kII, kV };

std::string situationName(Situation s);
std::optional<Situation> situationFromName(const std::string& name);

// Invertible scalar observation maps applied after the inner additive stage.
class ObservationMap {
 public:
  enum class Kind {
    kIdentity,
    kLinear,        // a*v + b
    kHalfPlusCbrt,  // v/2 + cbrt(v)
    kCubePlusLinear,// v + a*v^3
    kTanhScaled,    // tanh(v/a)
    kLogShifted,    // log(v + a), domain v > -a
  };

  ObservationMap() = default;
  ObservationMap(Kind kind, double a = 1.0, double b = 0.0);

  double operator()(double v) const;  // DomainError outside the domain
  double inverse(double y) const;
  bool increasing() const;
  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  std::string name() const;

  std::string toJsonText() const;
  static ObservationMap fromJsonText(const std::string& text);

 private:
  Kind kind_ = Kind::kIdentity;
  double a_ = 1.0;
  double b_ = 0.0;
};

// Builder configuration. Defaults reproduce the two simulation setups.
struct CounterexampleConfig {
  // Situation I: slope of the linear inner map between standard Gaussians.
  double lin_slope = 1.0;

  // Situation II (defaults are the first simulation's constants).
  double h_slope = -1.0;
  double c1 = 0.3;
  double c2 = -1.0;
  double c3 = 1.0;
  double c5 = -1.0;
  double c6 = 1.0;   // cause-side linear coefficient; sign must keep
                     // -h_slope*c1*c6 > 0
  double c8 = 0.0;   // additive constant of h1

  // Situation V closure parameters (defaults are the second simulation's).
  Sol1Params ode;

  // Observation maps; unset means the situation's default.
  std::optional<ObservationMap> g2, f2;

  // Translate disturbances to zero mean at build time.
  bool center = true;

  int grid_points = 4096;
};

// A fully specified non-identifiable model: disturbance densities for both
// reading directions, the inner map h of the forward reading, the inner map
// h1 of the backward reading, and the observation maps.
class CounterexampleModel {
 public:
  Situation situation() const { return situation_; }
  const DensitySpec& pT1() const { return p_t1_; }
  const DensitySpec& pE2() const { return p_e2_; }
  const ObservationMap& g2() const { return g2_; }
  const ObservationMap& f2() const { return f2_; }

  double h(double t) const;
  double hp(double t) const;
  double hpp(double t) const;
  double hppp(double t) const;

  double h1(double z) const;
  double h1p(double z) const;

  // Log-density derivatives of the disturbances. For Situation V these come
  // from the closure grids (third order from the closure right-hand sides).
  LogDensityDerivs eta1Derivs(double t) const;
  LogDensityDerivs eta2Derivs(double e) const;

  std::pair<double, double> tRange() const;
  std::pair<double, double> eRange() const;
  std::pair<double, double> zRange() const;

  const std::optional<Situation5Solution>& odeSolution() const { return ode_; }
  const Sol1Params& odeParams() const { return ode_params_; }

 private:
  friend CounterexampleModel buildCounterexample(Situation,
                                                 const CounterexampleConfig&);
  struct Builder;
  CounterexampleModel() = default;

  Situation situation_ = Situation::kI;
  DensitySpec p_t1_ = DensitySpec::gaussian(0, 1);
  DensitySpec p_e2_ = DensitySpec::gaussian(0, 1);
  ObservationMap g2_, f2_;

  bool h_linear_ = true;
  double h_slope_ = 1.0;
  GridFunction h_grid_, hp_grid_, hpp_grid_, hppp_grid_;
  GridFunction eta1ppp_grid_;

  // h1 is linear (I), logistic-integral closed form (II), or tabulated (V).
  enum class H1Kind { kLinear, kClosedForm, kGrid };
  H1Kind h1_kind_ = H1Kind::kLinear;
  double h1_slope_ = 0.5;
  double h1_c1_ = 0.0, h1_k_ = 0.0, h1_hprime_ = 1.0, h1_c8_ = 0.0;
  GridFunction h1_grid_, h1p_grid_;
  // Anchor-point derivatives behind the tabulated h1: the cross-derivative
  // ratio is evaluated analytically at (t = 0, e = z - h(0)).
  double ratio_eta1pp0_ = 0.0, ratio_hp0_ = 1.0, ratio_hpp0_ = 0.0,
         ratio_h0_ = 0.0;

  Sol1Params ode_params_;
  std::optional<Situation5Solution> ode_;
};

// Constructs the requested situation. The disturbance densities are
// normalized (and translated to zero mean when config.center is set), the
// backward inner map h1 is derived so that the backward disturbances
// (z2, e1) are exactly independent.
CounterexampleModel buildCounterexample(
    Situation situation, const CounterexampleConfig& config = {});

// The backward inner map h1 tabulated over the model's z range, built from
// the cross-derivative ratio: closed form for Situations I and II, ratio
// integration (anchored at h1(0) = 0) for Situation V.
GridFunction computeH1(const CounterexampleModel& model, double step = 1e-3);

// Latent and observed columns of a generated pair dataset. Latent columns
// always satisfy z2 = h(t1) + e2 and e1 = t1 - h1(z2) exactly as evaluated
// by the generating model.
struct PairDataset {
  std::vector<double> x1, x2;
  std::vector<double> t1, e2, z2, e1;
  std::uint64_t seed = 0;

  std::size_t n() const { return x1.size(); }
  bool hasLatent() const { return t1.size() == x1.size() && !t1.empty(); }
  void writeCsv(std::ostream& out) const;
  static PairDataset readCsv(std::istream& in);
};

// Forward disturbances mapped to the backward reading's disturbances.
// Output order: {z2, e1}.
std::pair<double, double> backwardTransform(const CounterexampleModel& model,
                                            double t1, double e2);

// Transforms given disturbance columns through both readings and the
// observation maps; latent columns are retained.
PairDataset observePair(const CounterexampleModel& model,
                        const std::vector<double>& t1,
                        const std::vector<double>& e2);

// Draws n disturbance rows i.i.d. from the model densities and observes them.
PairDataset samplePair(const CounterexampleModel& model, int n,
                       std::uint64_t seed);

// Largest absolute deviation from the two cross-derivative identities over a
// product grid, skipping points where eta2''*h' is numerically zero.
struct Theorem1Residual {
  double max_eq4 = 0.0;   // third-order identity
  double max_eq5 = 0.0;   // model h1' vs the cross-derivative ratio
  long evaluated = 0;
  long skipped = 0;
};

Theorem1Residual theorem1Residual(const CounterexampleModel& model,
                                  const std::vector<double>& t_grid,
                                  const std::vector<double>& e_grid,
                                  double skip_tol = 1e-12);

// Uniformly spaced evaluation grid helper.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace pnl

#endif  // PNL_COUNTEREXAMPLE_HPP
