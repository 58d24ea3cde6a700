#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnl/counterexample.hpp"
#include "pnl/csv.hpp"
#include "pnl/dag.hpp"
#include "pnl/density.hpp"
#include "pnl/errors.hpp"
#include "pnl/hsic.hpp"
#include "pnl/nlica.hpp"
#include "pnl/ode.hpp"
#include "pnl/synthetic.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Command-line contract violations that CLI11 itself cannot see.
struct UsageError {
  std::string message;
};

// Common options; values resolve as flag > config-file key > default.
struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<std::string> out;
  std::optional<int> restarts, iters;
  std::string config_path;

  void addTo(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed (u64)");
    cmd->add_option("--alpha", alpha, "test level in (0,1), default 0.05");
    cmd->add_option("--out", out, "output path");
    cmd->add_option("--config", config_path, "JSON config; keys mirror flags");
    cmd->add_option("--restarts", restarts, "fit restarts, default 3");
    cmd->add_option("--iters", iters, "fit iteration cap, default 2000");
  }

  void applyConfigFile() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw pnl::PreconditionError("cannot open config: " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw pnl::ConstructionError(std::string("bad config JSON: ") + e.what());
    }
    if (!seed && j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    if (!alpha && j.contains("alpha")) alpha = j["alpha"].get<double>();
    if (!out && j.contains("out")) out = j["out"].get<std::string>();
    if (!restarts && j.contains("restarts")) restarts = j["restarts"].get<int>();
    if (!iters && j.contains("iters")) iters = j["iters"].get<int>();
  }

  std::uint64_t seedOr(std::uint64_t d) const { return seed.value_or(d); }
  double alphaOr(double d) const { return alpha.value_or(d); }
  pnl::FitConfig fitConfig(std::uint64_t default_seed) const {
    pnl::FitConfig cfg;
    cfg.seed = seedOr(default_seed);
    cfg.alpha = alphaOr(0.05);
    if (restarts) cfg.restarts = *restarts;
    if (iters) cfg.max_iters = *iters;
    return cfg;
  }
  json echo(std::uint64_t default_seed) const {
    return json{{"seed", seedOr(default_seed)},
                {"alpha", alphaOr(0.05)},
                {"out", out.value_or("")},
                {"restarts", restarts.value_or(3)},
                {"iters", iters.value_or(2000)}};
  }
};

void emitReport(const std::string& command, json config, json results,
                std::uint64_t seed, Clock::time_point t0) {
  const double wall =
      std::chrono::duration<double>(Clock::now() - t0).count();
  json report{{"command", command},
              {"seed", seed},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"wall_time", wall}};
  std::cout << report.dump(2) << "\n";
}

pnl::CsvTable loadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pnl::PreconditionError("cannot open data file: " + path);
  return pnl::readCsv(in);
}

std::string loadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pnl::PreconditionError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw pnl::PreconditionError("cannot write file: " + path);
  out << text;
}

json hsicJson(const pnl::HsicResult& r) {
  return json{{"statistic", r.statistic},
              {"threshold", r.threshold},
              {"alpha", r.alpha},
              {"independent", r.independent},
              {"n", r.n}};
}

// ---- gen ----

int runGen(const Common& cm, const std::string& situation,
           const std::string& kind, int n, Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(0);
  if (situation.empty() == kind.empty())
    throw UsageError{"gen: give exactly one of --situation or --kind"};
  if (!cm.out) throw UsageError{"gen: --out is required"};

  json cfg = cm.echo(0);
  cfg["n"] = n;
  std::vector<std::string> columns;
  if (!situation.empty()) {
    cfg["situation"] = situation;
    const auto sit = pnl::situationFromName(situation);
    if (!sit)
      throw pnl::PreconditionError("gen: unknown situation: " + situation);
    const auto model = pnl::buildCounterexample(*sit);
    const auto data = pnl::samplePair(model, n, seed);
    std::ofstream out(*cm.out);
    if (!out) throw pnl::PreconditionError("cannot write file: " + *cm.out);
    data.writeCsv(out);
    columns = {"x1", "x2", "t1", "e2", "z2", "e1"};
  } else {
    cfg["kind"] = kind;
    pnl::CsvTable table;
    if (kind == "uniform") {
      auto s = pnl::uniformDisturbancePair(n, seed);
      table.headers = {"x1", "x2"};
      table.columns = {std::move(s.x1), std::move(s.x2)};
    } else if (kind == "square") {
      auto s = pnl::squareCausePair(n, seed);
      table.headers = {"x1", "x2"};
      table.columns = {std::move(s.x1), std::move(s.x2)};
    } else if (kind == "chain3") {
      table.headers = {"x0", "x1", "x2"};
      table.columns = pnl::pnlChain3(n, seed);
    } else {
      throw pnl::PreconditionError("gen: unknown kind: " + kind);
    }
    columns = table.headers;
    std::ofstream out(*cm.out);
    if (!out) throw pnl::PreconditionError("cannot write file: " + *cm.out);
    pnl::writeCsv(out, table);
  }
  emitReport("gen", cfg,
             json{{"rows", n}, {"columns", columns}, {"path", *cm.out}}, seed,
             t0);
  return 0;
}

// ---- fit-pair ----

int runFitPair(const Common& cm, const std::string& data_path,
               Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(0);
  const auto table = loadCsv(data_path);
  const std::vector<double>* x1 = nullptr;
  const std::vector<double>* x2 = nullptr;
  if (table.hasColumn("x1") && table.hasColumn("x2")) {
    x1 = &table.column("x1");
    x2 = &table.column("x2");
  } else if (table.columns.size() >= 2) {
    x1 = &table.columns[0];
    x2 = &table.columns[1];
  } else {
    throw pnl::PreconditionError("fit-pair: need two data columns");
  }
  const auto cfg = cm.fitConfig(0);
  const auto decision = pnl::decidePair(*x1, *x2, cfg.alpha, cfg);
  json cfgEcho = cm.echo(0);
  cfgEcho["data"] = data_path;
  json payload = json::parse(decision.toJsonText());
  if (cm.out) writeTextFile(*cm.out, payload.dump(2) + "\n");
  emitReport("fit-pair", cfgEcho, payload, seed, t0);
  return 0;
}

// ---- fit-dag ----

int runFitDag(const Common& cm, const std::string& data_path,
              const std::string& dag_path, const std::string& cpdag_path,
              bool all, Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(0);
  const int modes = (!dag_path.empty()) + (!cpdag_path.empty()) + (all ? 1 : 0);
  if (modes != 1)
    throw UsageError{"fit-dag: give exactly one of --dag, --cpdag, --all"};
  const auto table = loadCsv(data_path);
  const auto cfg = cm.fitConfig(0);
  json cfgEcho = cm.echo(0);
  cfgEcho["data"] = data_path;

  json payload;
  if (!dag_path.empty()) {
    cfgEcho["dag"] = dag_path;
    const auto dag = pnl::Dag::fromJsonText(loadText(dag_path));
    const auto report =
        pnl::fitDag(table.columns, dag, cfg.alpha, cfg, nullptr);
    payload = json::parse(report.toJsonText());
  } else {
    std::vector<pnl::Dag> dags;
    if (all) {
      cfgEcho["all"] = true;
      dags = pnl::enumerateAllDags(static_cast<int>(table.columns.size()));
    } else {
      cfgEcho["cpdag"] = cpdag_path;
      const auto cpdag = pnl::Cpdag::fromJsonText(loadText(cpdag_path));
      if (cpdag.n != static_cast<int>(table.columns.size()))
        throw pnl::PreconditionError(
            "fit-dag: cpdag node count and column count differ");
      dags = pnl::enumerateExtensions(cpdag);
    }
    pnl::FitCache cache;
    std::vector<pnl::DagFitReport> reports;
    reports.reserve(dags.size());
    for (const auto& d : dags)
      reports.push_back(pnl::fitDag(table.columns, d, cfg.alpha, cfg, &cache));
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(json::parse(r.toJsonText()));
    const auto selected = pnl::selectModel(reports);
    payload = json{{"candidates", dags.size()},
                   {"reports", std::move(arr)},
                   {"selected", selected ? json::parse(selected->toJsonText())
                                         : json()}};
  }
  if (cm.out) writeTextFile(*cm.out, payload.dump(2) + "\n");
  emitReport("fit-dag", cfgEcho, payload, seed, t0);
  return 0;
}

// ---- hsic ----

int runHsic(const Common& cm, const std::string& data_path, int split,
            Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(0);
  const auto table = loadCsv(data_path);
  if (split < 1 || split >= static_cast<int>(table.columns.size()))
    throw pnl::PreconditionError(
        "hsic: --split must leave columns on both sides");
  pnl::ColumnBlock x(table.columns.begin(), table.columns.begin() + split);
  pnl::ColumnBlock y(table.columns.begin() + split, table.columns.end());
  const auto r = pnl::hsicTest(x, y, cm.alphaOr(0.05), {}, seed);
  json cfgEcho = cm.echo(0);
  cfgEcho["data"] = data_path;
  cfgEcho["split"] = split;
  emitReport("hsic", cfgEcho, hsicJson(r), seed, t0);
  return 0;
}

// ---- verify-theorem1 ----

int runVerify(const Common& cm, const std::string& situation, int grid,
              Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(0);
  const auto sit = pnl::situationFromName(situation);
  if (!sit)
    throw pnl::PreconditionError("verify-theorem1: unknown situation: " +
                                 situation);
  if (grid < 2) throw pnl::PreconditionError("verify-theorem1: grid < 2");
  const auto model = pnl::buildCounterexample(*sit);
  const auto [tlo, thi] = model.tRange();
  const auto [elo, ehi] = model.eRange();
  const auto res = pnl::theorem1Residual(model, pnl::linspace(tlo, thi, grid),
                                         pnl::linspace(elo, ehi, grid));
  json payload{{"max_eq4", res.max_eq4},
               {"max_eq5", res.max_eq5},
               {"evaluated", res.evaluated},
               {"skipped", res.skipped},
               {"grid", grid}};
  if (model.odeSolution())
    payload["ode_consistency"] =
        pnl::consistencyResidual(*model.odeSolution(), model.odeParams());
  json cfgEcho = cm.echo(0);
  cfgEcho["situation"] = situation;
  cfgEcho["grid"] = grid;
  emitReport("verify-theorem1", cfgEcho, payload, seed, t0);
  return 0;
}

// ---- repro-sim1 / repro-sim2 ----

json decisionRow(const std::string& pair, const pnl::HsicResult& r) {
  json row = hsicJson(r);
  row["pair"] = pair;
  row["decision"] = r.independent ? "accepted" : "rejected";
  return row;
}

int runSim1(const Common& cm, int n, Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(1);
  const auto model = pnl::buildCounterexample(pnl::Situation::kII);
  const auto data = pnl::samplePair(model, n, seed);
  const double alpha = cm.alphaOr(0.05);

  const auto latent_fwd = pnl::hsicTest(data.t1, data.e2, alpha, {}, seed);
  const auto latent_bwd = pnl::hsicTest(data.z2, data.e1, alpha, {}, seed);
  auto cfg = cm.fitConfig(seed);
  const auto decision = pnl::decidePair(data.x1, data.x2, alpha, cfg);

  json rows = json::array();
  rows.push_back(decisionRow("t1,e2", latent_fwd));
  rows.push_back(decisionRow("z2,e1", latent_bwd));
  if (decision.forward)
    rows.push_back(decisionRow("x1,e2hat", decision.forward->hsic));
  if (decision.backward)
    rows.push_back(decisionRow("x2,e1hat", decision.backward->hsic));
  json payload{{"rows", std::move(rows)},
               {"verdict", pnl::verdictName(decision.verdict)}};
  if (!decision.forward_error.empty())
    payload["forward_error"] = decision.forward_error;
  if (!decision.backward_error.empty())
    payload["backward_error"] = decision.backward_error;

  if (cm.out) {
    std::ofstream out(*cm.out);
    if (!out) throw pnl::PreconditionError("cannot write file: " + *cm.out);
    data.writeCsv(out);
    payload["samples_path"] = *cm.out;
  }
  json cfgEcho = cm.echo(1);
  cfgEcho["n"] = n;
  emitReport("repro-sim1", cfgEcho, payload, seed, t0);
  return 0;
}

int runSim2(const Common& cm, int n, int grid, bool skip_fit,
            Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(1);
  const auto model = pnl::buildCounterexample(pnl::Situation::kV);
  const double alpha = cm.alphaOr(0.05);

  const auto [tlo, thi] = model.tRange();
  const auto [elo, ehi] = model.eRange();
  const auto res = pnl::theorem1Residual(model, pnl::linspace(tlo, thi, grid),
                                         pnl::linspace(elo, ehi, grid));
  json payload{
      {"ode_consistency",
       pnl::consistencyResidual(*model.odeSolution(), model.odeParams())},
      {"max_eq4", res.max_eq4},
      {"max_eq5", res.max_eq5},
      {"evaluated", res.evaluated},
      {"skipped", res.skipped},
      {"hp_ratio", model.hp(thi) / model.hp(0.0)}};

  const auto data = pnl::samplePair(model, n, seed);
  json rows = json::array();
  rows.push_back(
      decisionRow("t1,e2", pnl::hsicTest(data.t1, data.e2, alpha, {}, seed)));
  rows.push_back(
      decisionRow("z2,e1", pnl::hsicTest(data.z2, data.e1, alpha, {}, seed)));
  if (!skip_fit) {
    auto cfg = cm.fitConfig(seed);
    const auto decision = pnl::decidePair(data.x1, data.x2, alpha, cfg);
    if (decision.forward)
      rows.push_back(decisionRow("x1,e2hat", decision.forward->hsic));
    if (decision.backward)
      rows.push_back(decisionRow("x2,e1hat", decision.backward->hsic));
    payload["verdict"] = pnl::verdictName(decision.verdict);
    if (!decision.forward_error.empty())
      payload["forward_error"] = decision.forward_error;
    if (!decision.backward_error.empty())
      payload["backward_error"] = decision.backward_error;
  }
  payload["rows"] = std::move(rows);

  if (cm.out) {
    std::ofstream t_side(*cm.out + "_t.csv"), e_side(*cm.out + "_e.csv");
    if (!t_side || !e_side)
      throw pnl::PreconditionError("cannot write grids at prefix: " + *cm.out);
    pnl::exportCsv(*model.odeSolution(), t_side, e_side);
    payload["grid_paths"] = {*cm.out + "_t.csv", *cm.out + "_e.csv"};
  }
  json cfgEcho = cm.echo(1);
  cfgEcho["n"] = n;
  cfgEcho["grid"] = grid;
  cfgEcho["skip_fit"] = skip_fit;
  emitReport("repro-sim2", cfgEcho, payload, seed, t0);
  return 0;
}

// ---- classify-density ----

int runClassify(const Common& cm, const std::string& density_path,
                Clock::time_point t0) {
  const std::uint64_t seed = cm.seedOr(0);
  const auto spec = pnl::DensitySpec::fromJsonText(loadText(density_path));
  const auto tag = pnl::classifyFamily(spec);
  json payload{{"family", pnl::familyTagName(tag)},
               {"mean", spec.numericMean()},
               {"std", spec.numericStd()}};
  json cfgEcho = cm.echo(0);
  cfgEcho["density"] = density_path;
  emitReport("classify-density", cfgEcho, payload, seed, t0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = Clock::now();
  CLI::App app{"Post-nonlinear causal model toolkit"};
  app.require_subcommand(1);

  Common cm;
  std::string situation, kind, data_path, dag_path, cpdag_path, density_path;
  int n = 2000, split = 1, grid = 200, grid2 = 150;
  bool all_dags = false, skip_fit = false;

  auto* gen = app.add_subcommand("gen", "generate a dataset as CSV");
  cm.addTo(gen);
  gen->add_option("--situation", situation, "counterexample: i, ii, or v");
  gen->add_option("--kind", kind, "synthetic: uniform, square, or chain3");
  gen->add_option("--n", n, "rows, default 2000");

  auto* fitPair = app.add_subcommand("fit-pair", "two-direction fit + verdict");
  cm.addTo(fitPair);
  fitPair->add_option("--data", data_path, "CSV with columns x1,x2")
      ->required();

  auto* fitDagCmd = app.add_subcommand("fit-dag", "fit DAG candidates");
  cm.addTo(fitDagCmd);
  fitDagCmd->add_option("--data", data_path, "CSV, one column per node")
      ->required();
  fitDagCmd->add_option("--dag", dag_path, "DAG JSON to fit");
  fitDagCmd->add_option("--cpdag", cpdag_path, "CPDAG JSON; fits extensions");
  fitDagCmd->add_flag("--all", all_dags, "fit every DAG (at most 4 columns)");

  auto* hsicCmd = app.add_subcommand("hsic", "independence test on columns");
  cm.addTo(hsicCmd);
  hsicCmd->add_option("--data", data_path, "CSV data")->required();
  hsicCmd->add_option("--split", split,
                      "first k columns vs the rest, default 1");

  auto* verify = app.add_subcommand("verify-theorem1",
                                    "non-identifiability residuals");
  cm.addTo(verify);
  verify->add_option("--situation", situation, "i, ii, or v")->required();
  verify->add_option("--grid", grid, "grid points per axis, default 200");

  auto* sim1 = app.add_subcommand("repro-sim1", "first simulation bundle");
  cm.addTo(sim1);
  sim1->add_option("--n", n, "rows, default 2000");

  auto* sim2 = app.add_subcommand("repro-sim2", "second simulation bundle");
  cm.addTo(sim2);
  sim2->add_option("--n", n, "rows, default 2000");
  sim2->add_option("--grid", grid2, "residual grid per axis, default 150");
  sim2->add_flag("--skip-fit", skip_fit, "construction and latent rows only");

  auto* classify = app.add_subcommand("classify-density",
                                      "density family of a spec");
  cm.addTo(classify);
  classify->add_option("--density", density_path, "density spec JSON")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cm.applyConfigFile();
    if (gen->parsed()) return runGen(cm, situation, kind, n, t0);
    if (fitPair->parsed()) return runFitPair(cm, data_path, t0);
    if (fitDagCmd->parsed())
      return runFitDag(cm, data_path, dag_path, cpdag_path, all_dags, t0);
    if (hsicCmd->parsed()) return runHsic(cm, data_path, split, t0);
    if (verify->parsed()) return runVerify(cm, situation, grid, t0);
    if (sim1->parsed()) return runSim1(cm, n, t0);
    if (sim2->parsed()) return runSim2(cm, n, grid2, skip_fit, t0);
    if (classify->parsed()) return runClassify(cm, density_path, t0);
  } catch (const UsageError& e) {
    std::cerr << e.message << "\nRun with --help for more information.\n";
    return 2;
  } catch (const pnl::Error& e) {
    std::cout << json{{"error", {{"type", "model"}, {"message", e.what()}}}}
                     .dump(2)
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}
                     .dump(2)
              << "\n";
    return 1;
  }
  return 2;
}
