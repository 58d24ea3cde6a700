#include "pnl/nlica.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pnl/errors.hpp"
#include "pnl/rng.hpp"
#include "pnl/stats.hpp"

namespace pnl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxMixture = 16;

double tanhNet(const double* w, const double* b, const double* v, double c,
               int units, const double* x, int inputs) {
  double out = c;
  for (int u = 0; u < units; ++u) {
    double a = b[u];
    for (int j = 0; j < inputs; ++j) a += w[u * inputs + j] * x[j];
    out += v[u] * std::tanh(a);
  }
  return out;
}

void checkColumns(const ColumnBlock& cause, const std::vector<double>& effect) {
  if (cause.empty()) throw PreconditionError("fitDirection: empty cause block");
  const std::size_t n = effect.size();
  for (const auto& col : cause)
    if (col.size() != n)
      throw PreconditionError("fitDirection: column lengths differ");
  auto checkCol = [](const std::vector<double>& col, const char* what) {
    double lo = col.front(), hi = col.front();
    for (double v : col) {
      if (!std::isfinite(v))
        throw DegenerateInputError(std::string(what) + ": non-finite value");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi <= lo)
      throw DegenerateInputError(std::string(what) + ": constant column");
  };
  for (const auto& col : cause) checkCol(col, "fitDirection cause");
  checkCol(effect, "fitDirection effect");
}

std::vector<double> standardized(const std::vector<double>& col, double& mu,
                                 double& sd) {
  mu = mean(col);
  sd = standardDeviation(col);
  if (!(sd > 0.0)) throw DegenerateInputError("standardize: zero spread");
  std::vector<double> out(col.size());
  for (std::size_t i = 0; i < col.size(); ++i) out[i] = (col[i] - mu) / sd;
  return out;
}

}  // namespace

double CauseMap::operator()(const std::vector<double>& row) const {
  if (static_cast<int>(row.size()) != inputs)
    throw PreconditionError("CauseMap: row width mismatch");
  const double* p = params.data();
  return tanhNet(p, p + units * inputs, p + units * (inputs + 1),
                 params[static_cast<std::size_t>(units * (inputs + 2))], units,
                 row.data(), inputs);
}

double CauseMap::operator()(double x) const {
  return (*this)(std::vector<double>{x});
}

double MonotoneMap::logDerivative(double y) const {
  const double* p = params.data();
  return tanhNet(p, p + units, p + 2 * units,
                 params[static_cast<std::size_t>(3 * units)], units, &y, 1);
}

double MonotoneMap::derivative(double y) const {
  return std::exp(logDerivative(y));
}

double MonotoneMap::operator()(double y) const {
  if (anchors.empty()) throw StateError("MonotoneMap: not fitted");
  if (y <= anchors.front())
    return cumulative.front() +
           (y - anchors.front()) * derivative(anchors.front());
  if (y >= anchors.back())
    return cumulative.back() + (y - anchors.back()) * derivative(anchors.back());
  const auto it = std::upper_bound(anchors.begin(), anchors.end(), y);
  const std::size_t k = static_cast<std::size_t>(it - anchors.begin()) - 1;
  const double t = (y - anchors[k]) / (anchors[k + 1] - anchors[k]);
  return cumulative[k] + t * (cumulative[k + 1] - cumulative[k]);
}

double NoiseDensityModel::logPdf(double e) const {
  double score;
  return logPdfScore(e, score);
}

double NoiseDensityModel::logPdfScore(double e, double& score) const {
  constexpr double kLogTwoPi = 1.8378770664093453;
  const std::size_t k = weights.size();
  double local[kMaxMixture];
  std::vector<double> heap;
  double* lg = local;
  if (k > kMaxMixture) {
    heap.resize(k);
    lg = heap.data();
  }
  double top = kNegInf;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = e - means[j];
    lg[j] = std::log(weights[j]) -
            0.5 * (kLogTwoPi + std::log(variances[j]) + d * d / variances[j]);
    top = std::max(top, lg[j]);
  }
  if (!std::isfinite(top)) {
    score = 0.0;
    return kNegInf;
  }
  double sum = 0.0, wscore = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double r = std::exp(lg[j] - top);
    sum += r;
    wscore += r * (-(e - means[j]) / variances[j]);
  }
  score = wscore / sum;
  return top + std::log(sum);
}

NoiseDensityModel NoiseDensityModel::fit(const std::vector<double>& data,
                                         int components, int max_iters) {
  if (data.empty()) throw DegenerateInputError("NoiseDensityModel: no data");
  if (components < 1)
    throw PreconditionError("NoiseDensityModel: components < 1");
  constexpr double kVarFloor = 1e-8;
  const std::size_t n = data.size();
  const std::size_t k = static_cast<std::size_t>(components);

  std::vector<double> sorted(data);
  std::sort(sorted.begin(), sorted.end());
  NoiseDensityModel m;
  m.weights.assign(k, 1.0 / static_cast<double>(k));
  m.means.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double q = (static_cast<double>(j) + 0.5) / static_cast<double>(k);
    m.means[j] =
        sorted[static_cast<std::size_t>(q * static_cast<double>(n - 1))];
  }
  m.variances.assign(k, std::max(variance(data), kVarFloor));

  std::vector<double> resp(n * k);
  double prev = kNegInf;
  for (int it = 0; it < max_iters; ++it) {
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double top = kNegInf;
      for (std::size_t j = 0; j < k; ++j) {
        const double d = data[i] - m.means[j];
        resp[i * k + j] = std::log(m.weights[j]) -
                          0.5 * std::log(m.variances[j]) -
                          d * d / (2.0 * m.variances[j]);
        top = std::max(top, resp[i * k + j]);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        resp[i * k + j] = std::exp(resp[i * k + j] - top);
        sum += resp[i * k + j];
      }
      for (std::size_t j = 0; j < k; ++j) resp[i * k + j] /= sum;
      ll += top + std::log(sum);
    }
    for (std::size_t j = 0; j < k; ++j) {
      double rw = 0.0, rx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        rw += resp[i * k + j];
        rx += resp[i * k + j] * data[i];
      }
      const double mu = rx / std::max(rw, 1e-300);
      double rv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = data[i] - mu;
        rv += resp[i * k + j] * d * d;
      }
      m.means[j] = mu;
      m.variances[j] = std::max(rv / std::max(rw, 1e-300), kVarFloor);
      m.weights[j] = std::max(rw / static_cast<double>(n), 1e-12);
    }
    const double wsum =
        std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    for (double& w : m.weights) w /= wsum;
    if (it > 0 && ll - prev < 1e-10 * (1.0 + std::abs(ll))) break;
    prev = ll;
  }
  return m;
}

PnlObjective::PnlObjective(ColumnBlock cause, std::vector<double> effect,
                           int hidden_units, NoiseDensityModel mixture)
    : cause_(std::move(cause)), effect_(std::move(effect)), units_(hidden_units) {
  if (cause_.empty() || effect_.empty())
    throw PreconditionError("PnlObjective: empty data");
  for (const auto& col : cause_)
    if (col.size() != effect_.size())
      throw PreconditionError("PnlObjective: column lengths differ");
  if (units_ < 1) throw PreconditionError("PnlObjective: hidden_units < 1");
  const int p = static_cast<int>(cause_.size());
  cause_param_count_ = units_ * (p + 2) + 1;
  param_count_ = cause_param_count_ + 3 * units_ + 2;

  anchors_ = effect_;
  std::sort(anchors_.begin(), anchors_.end());
  anchors_.erase(std::unique(anchors_.begin(), anchors_.end()), anchors_.end());
  const std::size_t m = anchors_.size();
  gaps_.resize(m > 0 ? m - 1 : 0);
  for (std::size_t j = 0; j + 1 < m; ++j)
    gaps_[j] = anchors_[j + 1] - anchors_[j];
  rank_.resize(effect_.size());
  anchor_count_.assign(m, 0.0);
  for (std::size_t i = 0; i < effect_.size(); ++i) {
    const auto it =
        std::lower_bound(anchors_.begin(), anchors_.end(), effect_[i]);
    rank_[i] = static_cast<std::size_t>(it - anchors_.begin());
    anchor_count_[rank_[i]] += 1.0;
  }
  setMixture(std::move(mixture));
}

void PnlObjective::setMixture(NoiseDensityModel mixture) {
  if (mixture.weights.size() > kMaxMixture)
    throw PreconditionError("PnlObjective: too many mixture components");
  mixture_ = std::move(mixture);
  constexpr double kLogTwoPi = 1.8378770664093453;
  const std::size_t k = mixture_.weights.size();
  mix_logconst_.resize(k);
  mix_invvar_.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    mix_logconst_[j] = std::log(mixture_.weights[j]) -
                       0.5 * (kLogTwoPi + std::log(mixture_.variances[j]));
    mix_invvar_[j] = 1.0 / mixture_.variances[j];
  }
}

double PnlObjective::mixtureLogPdfScore(double e, double& score) const {
  const std::size_t k = mixture_.weights.size();
  double lg[kMaxMixture];
  double top = kNegInf;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = e - mixture_.means[j];
    lg[j] = mix_logconst_[j] - 0.5 * d * d * mix_invvar_[j];
    top = std::max(top, lg[j]);
  }
  if (!std::isfinite(top)) {
    score = 0.0;
    return kNegInf;
  }
  double sum = 0.0, wscore = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double r = std::exp(lg[j] - top);
    sum += r;
    wscore -= r * (e - mixture_.means[j]) * mix_invvar_[j];
  }
  score = wscore / sum;
  return top + std::log(sum);
}

double PnlObjective::mapParamsTail(const std::vector<double>& params,
                                   double y) const {
  const double* p = params.data() + cause_param_count_;
  return tanhNet(p, p + units_, p + 2 * units_,
                 p[static_cast<std::size_t>(3 * units_)], units_, &y, 1);
}

std::vector<double> PnlObjective::anchorValues(
    const std::vector<double>& params) const {
  const std::size_t m = anchors_.size();
  const double offset =
      params[static_cast<std::size_t>(cause_param_count_ + 3 * units_ + 1)];
  std::vector<double> values(m);
  double prevE = std::exp(mapParamsTail(params, anchors_[0]));
  values[0] = anchors_[0] + offset;
  for (std::size_t j = 1; j < m; ++j) {
    const double e = std::exp(mapParamsTail(params, anchors_[j]));
    values[j] = values[j - 1] + 0.5 * gaps_[j - 1] * (prevE + e);
    prevE = e;
  }
  return values;
}

double PnlObjective::objective(const std::vector<double>& params) const {
  return evaluate(params, nullptr, nullptr, nullptr);
}

double PnlObjective::objectiveAndGradient(const std::vector<double>& params,
                                          std::vector<double>& grad) const {
  return evaluate(params, &grad, nullptr, nullptr);
}

std::vector<double> PnlObjective::residuals(
    const std::vector<double>& params) const {
  std::vector<double> res;
  evaluate(params, nullptr, &res, nullptr);
  return res;
}

double PnlObjective::mixtureTermOnly(const std::vector<double>& res,
                                     double smean) const {
  double total = 0.0;
  double score;
  for (double e : res) total += mixtureLogPdfScore(e, score);
  const double out = total / static_cast<double>(res.size()) + smean;
  return std::isfinite(out) ? out : kNegInf;
}

// Single forward (and optionally backward) pass. Outputs that are non-null
// receive the gradient, the residuals, and the mean of the log-derivative
// term respectively.
double PnlObjective::evaluate(const std::vector<double>& params,
                              std::vector<double>* grad,
                              std::vector<double>* res, double* smean) const {
  if (static_cast<int>(params.size()) != param_count_)
    throw PreconditionError("PnlObjective: parameter vector size mismatch");
  const int p = static_cast<int>(cause_.size());
  const std::size_t n = effect_.size();
  const std::size_t m = anchors_.size();
  const double* cw = params.data();
  const double* cb = cw + units_ * p;
  const double* cv = cb + units_;
  const double cc = cv[units_];
  const double* sw = params.data() + cause_param_count_;
  const double* sb = sw + units_;
  const double* sv = sw + 2 * units_;
  const double sc = sv[units_];
  const double offset = sv[units_ + 1];

  std::vector<double> sval(m), expv(m), tval(m);
  double stotal = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double s = sc;
    for (int u = 0; u < units_; ++u)
      s += sv[u] * std::tanh(sw[u] * anchors_[j] + sb[u]);
    sval[j] = s;
    expv[j] = std::exp(s);
    stotal += s * anchor_count_[j];
    if (!std::isfinite(expv[j])) return kNegInf;
  }
  tval[0] = anchors_[0] + offset;
  for (std::size_t j = 1; j < m; ++j) {
    tval[j] = tval[j - 1] + 0.5 * gaps_[j - 1] * (expv[j - 1] + expv[j]);
    if (!std::isfinite(tval[j])) return kNegInf;
  }
  if (smean) *smean = stotal / static_cast<double>(n);

  if (grad) grad->assign(static_cast<std::size_t>(param_count_), 0.0);
  if (res) res->assign(n, 0.0);
  std::vector<double> gsum;
  if (grad) gsum.assign(m, 0.0);
  std::vector<double> hidden(static_cast<std::size_t>(units_));
  std::vector<double> xrow(static_cast<std::size_t>(p));
  double total = stotal;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j)
      xrow[static_cast<std::size_t>(j)] = cause_[static_cast<std::size_t>(j)][i];
    double l1 = cc;
    for (int u = 0; u < units_; ++u) {
      double a = cb[u];
      for (int j = 0; j < p; ++j)
        a += cw[u * p + j] * xrow[static_cast<std::size_t>(j)];
      hidden[static_cast<std::size_t>(u)] = std::tanh(a);
      l1 += cv[u] * hidden[static_cast<std::size_t>(u)];
    }
    const std::size_t k = rank_[i];
    const double ehat = tval[k] - l1;
    if (res) (*res)[i] = ehat;
    double score;
    total += mixtureLogPdfScore(ehat, score);
    if (!grad && !std::isfinite(total)) return kNegInf;

    if (grad) {
      gsum[k] += score;
      const double gl1 = -score;
      (*grad)[static_cast<std::size_t>(units_ * (p + 2))] += gl1;
      for (int u = 0; u < units_; ++u) {
        const double t = hidden[static_cast<std::size_t>(u)];
        (*grad)[static_cast<std::size_t>(units_ * (p + 1) + u)] += gl1 * t;
        const double back = gl1 * cv[u] * (1.0 - t * t);
        (*grad)[static_cast<std::size_t>(units_ * p + u)] += back;
        for (int j = 0; j < p; ++j)
          (*grad)[static_cast<std::size_t>(u * p + j)] +=
              back * xrow[static_cast<std::size_t>(j)];
      }
    }
  }
  if (!std::isfinite(total)) return kNegInf;

  if (grad) {
    // Suffix sums carry each score to every anchor gap at or below its row.
    std::vector<double> suffix(m + 1, 0.0);
    for (std::size_t j = m; j-- > 0;) suffix[j] = suffix[j + 1] + gsum[j];
    const std::size_t ob = static_cast<std::size_t>(cause_param_count_);
    const std::size_t u3 = static_cast<std::size_t>(3 * units_);
    (*grad)[ob + u3 + 1] = suffix[0];
    for (std::size_t j = 0; j < m; ++j) {
      double coeff = 0.0;
      if (j >= 1) coeff += 0.5 * gaps_[j - 1] * suffix[j];
      if (j + 1 < m) coeff += 0.5 * gaps_[j] * suffix[j + 1];
      const double wgt = coeff * expv[j] + anchor_count_[j];
      if (wgt == 0.0) continue;
      (*grad)[ob + u3] += wgt;
      for (int u = 0; u < units_; ++u) {
        const double t = std::tanh(sw[u] * anchors_[j] + sb[u]);
        (*grad)[ob + static_cast<std::size_t>(2 * units_ + u)] += wgt * t;
        const double back = wgt * sv[u] * (1.0 - t * t);
        (*grad)[ob + static_cast<std::size_t>(units_ + u)] += back;
        (*grad)[ob + static_cast<std::size_t>(u)] += back * anchors_[j];
      }
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& g : *grad) g *= inv;
  }
  return total / static_cast<double>(n);
}

namespace {

struct RestartOutcome {
  std::vector<double> params;
  NoiseDensityModel mixture;
  std::vector<double> trace;
  double objective = kNegInf;
  bool converged = false;
  bool ok = false;
};

bool anyNonFinite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return true;
  return false;
}

RestartOutcome runRestart(PnlObjective& obj, const FitConfig& cfg,
                          std::uint64_t seed, int restart, int inputs) {
  Rng rng = Rng::forStream(seed, "restart-" + std::to_string(restart));
  const int units = cfg.hidden_units;
  std::vector<double> theta(static_cast<std::size_t>(obj.paramCount()), 0.0);
  const double wscale = 0.7 / std::sqrt(static_cast<double>(inputs));
  std::size_t idx = 0;
  for (int u = 0; u < units; ++u)
    for (int j = 0; j < inputs; ++j) theta[idx++] = wscale * rng.normal();
  for (int u = 0; u < units; ++u) theta[idx++] = 0.3 * rng.normal();
  const double vscale = 0.5 / std::sqrt(static_cast<double>(units));
  for (int u = 0; u < units; ++u) theta[idx++] = vscale * rng.normal();
  theta[idx++] = 0.0;  // l1 output bias
  for (int u = 0; u < units; ++u) theta[idx++] = 0.7 * rng.normal();
  for (int u = 0; u < units; ++u) theta[idx++] = 0.3 * rng.normal();
  const double v2scale = 0.1 / std::sqrt(static_cast<double>(units));
  for (int u = 0; u < units; ++u) theta[idx++] = v2scale * rng.normal();
  theta[idx++] = 0.0;  // log-derivative bias
  theta[idx++] = 0.0;  // map offset

  RestartOutcome out;
  obj.setMixture(
      NoiseDensityModel::fit(obj.residuals(theta), cfg.mixture_components));
  std::vector<double> grad;
  double cur = obj.objectiveAndGradient(theta, grad);
  if (!std::isfinite(cur) || anyNonFinite(grad))
    throw DivergenceError("fit restart diverged at start",
                          static_cast<double>(restart));

  out.trace.push_back(cur);
  std::vector<double> delta(theta.size(), 0.02);
  std::vector<double> trial(theta.size());
  std::vector<double> gnew, resbuf;
  double smean = 0.0;
  int accepted = 0, stall = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    for (std::size_t q = 0; q < theta.size(); ++q) {
      const double s = grad[q] > 0.0 ? 1.0 : (grad[q] < 0.0 ? -1.0 : 0.0);
      trial[q] = theta[q] + s * delta[q];
    }
    const double jtry = obj.evaluate(trial, &gnew, &resbuf, &smean);
    if (std::isfinite(jtry) && jtry >= cur && !anyNonFinite(gnew)) {
      const double gain = jtry - cur;
      theta = trial;
      cur = jtry;
      ++accepted;
      for (std::size_t q = 0; q < theta.size(); ++q) {
        if (gnew[q] * grad[q] > 0.0)
          delta[q] = std::min(delta[q] * 1.2, 0.5);
        else if (gnew[q] * grad[q] < 0.0)
          delta[q] = std::max(delta[q] * 0.5, 1e-10);
      }
      grad.swap(gnew);
      if (cfg.em_interval > 0 && accepted % cfg.em_interval == 0) {
        NoiseDensityModel old = obj.mixture();
        obj.setMixture(
            NoiseDensityModel::fit(resbuf, cfg.mixture_components));
        const double jem = obj.mixtureTermOnly(resbuf, smean);
        if (std::isfinite(jem) && jem >= cur) {
          cur = jem;
          const double jg = obj.objectiveAndGradient(theta, grad);
          if (!std::isfinite(jg) || anyNonFinite(grad))
            throw DivergenceError("fit restart diverged",
                                  static_cast<double>(restart));
          cur = std::max(cur, jg);
        } else {
          obj.setMixture(std::move(old));
        }
      }
      out.trace.push_back(cur);
      stall = gain > 1e-6 * (1.0 + std::abs(cur)) ? 0 : stall + 1;
    } else {
      for (double& d : delta) d = std::max(d * 0.5, 1e-10);
      ++stall;
    }
    if (stall >= cfg.stall_limit) {
      out.converged = true;
      break;
    }
  }
  out.params = std::move(theta);
  out.mixture = obj.mixture();
  out.objective = cur;
  out.ok = true;
  return out;
}

}  // namespace

PnlFitResult fitDirection(const ColumnBlock& cause,
                          const std::vector<double>& effect,
                          const FitConfig& cfg) {
  checkColumns(cause, effect);
  if (effect.size() < 100)
    throw SampleSizeError("fitDirection: need at least 100 rows");
  if (cfg.restarts < 1) throw PreconditionError("fitDirection: restarts < 1");
  if (cfg.max_iters < 1) throw PreconditionError("fitDirection: max_iters < 1");
  if (cfg.mixture_components < 1 || cfg.mixture_components > kMaxMixture)
    throw PreconditionError("fitDirection: mixture_components out of range");

  PnlFitResult result;
  ColumnBlock xs(cause.size());
  result.cause_mean.resize(cause.size());
  result.cause_sd.resize(cause.size());
  for (std::size_t j = 0; j < cause.size(); ++j)
    xs[j] = standardized(cause[j], result.cause_mean[j], result.cause_sd[j]);
  std::vector<double> ys =
      standardized(effect, result.effect_mean, result.effect_sd);

  PnlObjective obj(xs, ys, cfg.hidden_units,
                   NoiseDensityModel{{1.0}, {0.0}, {1.0}});
  const int inputs = static_cast<int>(xs.size());

  RestartOutcome best;
  std::string last_error;
  for (int r = 0; r < cfg.restarts; ++r) {
    try {
      RestartOutcome cand = runRestart(obj, cfg, cfg.seed, r, inputs);
      if (!best.ok || cand.objective > best.objective) best = std::move(cand);
    } catch (const DivergenceError& e) {
      last_error = e.what();
    }
  }
  if (!best.ok)
    throw DivergenceError(
        "fitDirection: every restart diverged (" + last_error + ")",
        static_cast<double>(cfg.restarts));

  obj.setMixture(best.mixture);
  result.residuals = obj.residuals(best.params);
  result.objective_trace = std::move(best.trace);
  result.objective = best.objective;
  result.converged = best.converged;

  const int cpc = obj.causeParamCount();
  result.l1.inputs = inputs;
  result.l1.units = cfg.hidden_units;
  result.l1.params.assign(best.params.begin(), best.params.begin() + cpc);
  result.l2.units = cfg.hidden_units;
  result.l2.params.assign(best.params.begin() + cpc, best.params.end());
  result.l2.anchors = obj.anchors();
  result.l2.cumulative = obj.anchorValues(best.params);

  double in_range = 0.0;
  for (const auto& col : xs) {
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    in_range = std::max(in_range, *hi - *lo);
  }
  double out_lo = std::numeric_limits<double>::infinity(), out_hi = -out_lo;
  std::vector<double> row(xs.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) row[j] = xs[j][i];
    const double v = result.l1(row);
    out_lo = std::min(out_lo, v);
    out_hi = std::max(out_hi, v);
  }
  result.l1_degenerate = (out_hi - out_lo) <= 1e-6 * in_range;

  result.hsic =
      hsicTest(xs, ColumnBlock{result.residuals}, cfg.alpha, cfg.kernel,
               Rng::forStream(cfg.seed, "fit-hsic").nextU64());
  return result;
}

std::string verdictName(Verdict v) {
  switch (v) {
    case Verdict::kX1ToX2: return "X1->X2";
    case Verdict::kX2ToX1: return "X2->X1";
    case Verdict::kBoth: return "Both";
    case Verdict::kNeither: return "Neither";
  }
  return "Neither";
}

PairDecision decidePair(const std::vector<double>& x1,
                        const std::vector<double>& x2, double alpha,
                        const FitConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw PreconditionError("decidePair: alpha outside (0, 1)");
  PairDecision d;
  FitConfig base = cfg;
  base.alpha = alpha;
  {
    FitConfig fc = base;
    fc.seed = Rng::forStream(cfg.seed, "pair-forward").nextU64();
    try {
      d.forward = fitDirection(ColumnBlock{x1}, x2, fc);
    } catch (const Error& e) {
      d.forward_error = e.what();
    }
  }
  {
    FitConfig bc = base;
    bc.seed = Rng::forStream(cfg.seed, "pair-backward").nextU64();
    try {
      d.backward = fitDirection(ColumnBlock{x2}, x1, bc);
    } catch (const Error& e) {
      d.backward_error = e.what();
    }
  }
  const bool af = d.forward.has_value() && d.forward->hsic.independent;
  const bool ab = d.backward.has_value() && d.backward->hsic.independent;
  d.verdict = af && ab ? Verdict::kBoth
              : af     ? Verdict::kX1ToX2
              : ab     ? Verdict::kX2ToX1
                       : Verdict::kNeither;
  return d;
}

namespace {

nlohmann::json fitJson(const PnlFitResult& r) {
  return nlohmann::json{
      {"objective", r.objective},
      {"converged", r.converged},
      {"l1_degenerate", r.l1_degenerate},
      {"accepted_steps",
       r.objective_trace.empty() ? 0 : r.objective_trace.size() - 1},
      {"residual_count", r.residuals.size()},
      {"hsic",
       {{"statistic", r.hsic.statistic},
        {"threshold", r.hsic.threshold},
        {"alpha", r.hsic.alpha},
        {"independent", r.hsic.independent},
        {"n", r.hsic.n}}}};
}

}  // namespace

std::string PnlFitResult::toJsonText() const { return fitJson(*this).dump(2); }

std::string PairDecision::toJsonText() const {
  nlohmann::json j;
  j["verdict"] = verdictName(verdict);
  j["forward"] = forward ? fitJson(*forward) : nlohmann::json();
  j["backward"] = backward ? fitJson(*backward) : nlohmann::json();
  if (!forward_error.empty()) j["forward_error"] = forward_error;
  if (!backward_error.empty()) j["backward_error"] = backward_error;
  return j.dump(2);
}

}  // namespace pnl
