#ifndef PNL_NLICA_HPP
#define PNL_NLICA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnl/hsic.hpp"

namespace pnl {

// One-hidden-layer tanh network mapping a cause vector to a real value.
// Parameter layout: weights (units x inputs, row-major), hidden biases,
// output weights, output bias.
struct CauseMap {
  int inputs = 1;
  int units = 10;
  std::vector<double> params;

  static int paramCount(int inputs, int units) { return units * (inputs + 2) + 1; }
  double operator()(const std::vector<double>& row) const;
  double operator()(double x) const;
};

// Strictly increasing map parametrized by its log-derivative s (same
// network shape on a scalar input, plus an additive offset). Values at the
// sorted anchor grid come from trapezoid integration of exp(s); between
// anchors values interpolate linearly and beyond the ends they extrapolate
// with slope exp(s), so the map stays strictly increasing and exact at
// anchors.
struct MonotoneMap {
  int units = 10;
  std::vector<double> params;      // s-network weights plus trailing offset
  std::vector<double> anchors;     // sorted unique effect values
  std::vector<double> cumulative;  // map values at the anchors

  double logDerivative(double y) const;  // s(y)
  double derivative(double y) const;     // exp(s(y))
  double operator()(double y) const;
};

// Gaussian mixture density for the fitted disturbance.
struct NoiseDensityModel {
  std::vector<double> weights, means, variances;

  double logPdf(double e) const;
  // d/de log p(e); also returns the log-density.
  double logPdfScore(double e, double& score) const;

  // Deterministic expectation-maximization fit: quantile-initialized means,
  // pooled initial variance, variance floor 1e-8.
  static NoiseDensityModel fit(const std::vector<double>& data, int components,
                               int max_iters = 100);
};

struct FitConfig {
  int hidden_units = 10;
  int mixture_components = 3;
  int restarts = 3;
  int max_iters = 2000;
  int em_interval = 20;   // accepted steps between mixture refits
  int stall_limit = 60;   // consecutive non-improving iterations before stop
  double alpha = 0.05;    // level of the attached independence test
  KernelConfig kernel;
  std::uint64_t seed = 0;
};

struct PnlFitResult {
  CauseMap l1;
  MonotoneMap l2;
  std::vector<double> residuals;        // standardized-scale disturbances
  std::vector<double> objective_trace;  // accepted objective values
  double objective = 0.0;
  HsicResult hsic;                      // residuals vs. cause
  bool converged = false;
  bool l1_degenerate = false;  // fitted l1 output range below 1e-6 x input range

  // Standardization applied to the inputs before fitting.
  std::vector<double> cause_mean, cause_sd;
  double effect_mean = 0.0, effect_sd = 1.0;

  std::string toJsonText() const;
};

// The fitting objective bound to one (standardized) dataset: mean of
// log p_mix(l2(y) - l1(x)) + s(y) over rows, with the mixture held fixed.
// Parameter vector: CauseMap block followed by the MonotoneMap block.
class PnlObjective {
 public:
  PnlObjective(ColumnBlock cause, std::vector<double> effect, int hidden_units,
               NoiseDensityModel mixture);

  int paramCount() const { return param_count_; }
  int causeParamCount() const { return cause_param_count_; }
  const NoiseDensityModel& mixture() const { return mixture_; }
  void setMixture(NoiseDensityModel mixture);

  double objective(const std::vector<double>& params) const;
  // Analytic gradient; returns the objective value.
  double objectiveAndGradient(const std::vector<double>& params,
                              std::vector<double>& grad) const;
  std::vector<double> residuals(const std::vector<double>& params) const;
  // Fused pass: objective value plus, for each non-null output, the
  // gradient, the residuals, and the mean log-derivative term.
  double evaluate(const std::vector<double>& params, std::vector<double>* grad,
                  std::vector<double>* res, double* smean) const;
  // Objective recomputed from known residuals and log-derivative mean,
  // using the current mixture; avoids a full forward pass after a refit.
  double mixtureTermOnly(const std::vector<double>& res, double smean) const;

  const std::vector<double>& anchors() const { return anchors_; }
  // Map values at the anchors for the given parameters.
  std::vector<double> anchorValues(const std::vector<double>& params) const;

 private:
  double mapParamsTail(const std::vector<double>& params, double y) const;
  double mixtureLogPdfScore(double e, double& score) const;

  ColumnBlock cause_;
  std::vector<double> effect_;
  int units_;
  int param_count_ = 0, cause_param_count_ = 0;
  NoiseDensityModel mixture_;
  std::vector<double> mix_logconst_, mix_invvar_;
  std::vector<double> anchors_, gaps_;
  std::vector<std::size_t> rank_;        // anchor index per row
  std::vector<double> anchor_count_;     // rows per anchor
};

// Fits the constrained nonlinear ICA model for the hypothesis cause -> effect:
// alternating adaptive gradient steps on (l1, l2) and mixture refits, best of
// cfg.restarts seeded restarts. Columns are standardized internally. Requires
// n >= 100 (SampleSizeError); a restart whose objective turns non-finite is
// consumed; if every restart diverges, DivergenceError.
PnlFitResult fitDirection(const ColumnBlock& cause,
                          const std::vector<double>& effect,
                          const FitConfig& cfg = {});

enum class Verdict { kX1ToX2, kX2ToX1, kBoth, kNeither };

std::string verdictName(Verdict v);

struct PairDecision {
  Verdict verdict = Verdict::kNeither;
  std::optional<PnlFitResult> forward;   // hypothesis x1 -> x2
  std::optional<PnlFitResult> backward;  // hypothesis x2 -> x1
  std::string forward_error, backward_error;

  std::string toJsonText() const;
};

// Fits both hypotheses and combines the two independence decisions into the
// four-outcome verdict. A direction whose fit fails counts as dependent,
// with the error recorded.
PairDecision decidePair(const std::vector<double>& x1,
                        const std::vector<double>& x2, double alpha = 0.05,
                        const FitConfig& cfg = {});

}  // namespace pnl

#endif  // PNL_NLICA_HPP
