#include "pnl/dag.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pnl/errors.hpp"
#include "pnl/rng.hpp"

namespace pnl {

namespace {

void checkNode(int n, int v, const char* what) {
  if (v < 0 || v >= n)
    throw ConstructionError(std::string(what) + ": node index out of range");
}

std::vector<std::array<int, 3>> collidersOf(
    const Dag& dag, const std::vector<std::uint8_t>& skeleton) {
  std::vector<std::array<int, 3>> out;
  const int n = dag.n;
  for (int c = 0; c < n; ++c) {
    std::vector<int> pa = dag.parentsOf(c);
    for (std::size_t a = 0; a < pa.size(); ++a)
      for (std::size_t b = a + 1; b < pa.size(); ++b)
        if (!skeleton[static_cast<std::size_t>(pa[a] * n + pa[b])])
          out.push_back({pa[a], pa[b], c});
  }
  return out;
}

std::vector<std::uint8_t> symmetrized(const Dag& dag) {
  const int n = dag.n;
  std::vector<std::uint8_t> sk(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dag.edge(i, j)) {
        sk[static_cast<std::size_t>(i * n + j)] = 1;
        sk[static_cast<std::size_t>(j * n + i)] = 1;
      }
  return sk;
}

nlohmann::json edgesJson(const std::vector<std::pair<int, int>>& edges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [i, j] : edges) arr.push_back({i, j});
  return arr;
}

std::vector<std::pair<int, int>> edgesFromJson(const nlohmann::json& arr,
                                               const char* what) {
  if (!arr.is_array())
    throw ConstructionError(std::string(what) + ": expected an edge array");
  std::vector<std::pair<int, int>> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw ConstructionError(std::string(what) +
                              ": each edge must be a pair of node indices");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

}  // namespace

Dag Dag::empty(int n) {
  if (n < 1) throw ConstructionError("Dag: need at least one node");
  Dag d;
  d.n = n;
  d.adjacency.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                     0);
  return d;
}

void Dag::setEdge(int i, int j, bool on) {
  checkNode(n, i, "Dag::setEdge");
  checkNode(n, j, "Dag::setEdge");
  if (i == j) throw ConstructionError("Dag::setEdge: self loop");
  adjacency[static_cast<std::size_t>(i * n + j)] = on ? 1 : 0;
}

int Dag::edgeCount() const {
  int c = 0;
  for (std::uint8_t a : adjacency) c += a != 0;
  return c;
}

std::vector<int> Dag::parentsOf(int v) const {
  checkNode(n, v, "Dag::parentsOf");
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (edge(i, v)) out.push_back(i);
  return out;
}

std::optional<std::vector<int>> Dag::topologicalOrder() const {
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (edge(i, j)) ++indeg[static_cast<std::size_t>(j)];
  std::vector<int> queue, order;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    order.push_back(v);
    for (int w = 0; w < n; ++w)
      if (edge(v, w) && --indeg[static_cast<std::size_t>(w)] == 0)
        queue.push_back(w);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

std::string Dag::adjacencyKey() const {
  std::string key(adjacency.size(), '0');
  for (std::size_t i = 0; i < adjacency.size(); ++i)
    if (adjacency[i]) key[i] = '1';
  return key;
}

std::string Dag::toJsonText() const {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (edge(i, j)) edges.emplace_back(i, j);
  nlohmann::json j{{"n", n},
                   {"directed", edgesJson(edges)},
                   {"undirected", nlohmann::json::array()}};
  return j.dump(2);
}

Dag Dag::fromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("Dag: bad JSON: ") + e.what());
  }
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ConstructionError("Dag: missing integer field n");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "n" && key != "directed" && key != "undirected")
      throw ConstructionError("Dag: unknown field '" + key + "'");
  }
  if (!j.contains("directed"))
    throw ConstructionError("Dag: missing field directed");
  Dag d = Dag::empty(j["n"].get<int>());
  if (j.contains("undirected") && !j["undirected"].empty())
    throw ConstructionError("Dag: undirected edges not allowed");
  for (const auto& [i, k] : edgesFromJson(j["directed"], "Dag")) {
    checkNode(d.n, i, "Dag");
    checkNode(d.n, k, "Dag");
    if (d.edge(i, k)) throw ConstructionError("Dag: duplicate edge");
    d.setEdge(i, k, true);
  }
  if (!d.isAcyclic()) throw ConstructionError("Dag: cycle in edge list");
  return d;
}

void Cpdag::validate() const {
  if (n < 1) throw ConstructionError("Cpdag: need at least one node");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) *
                                     static_cast<std::size_t>(n),
                                 0);
  for (const auto& [i, j] : directed) {
    checkNode(n, i, "Cpdag");
    checkNode(n, j, "Cpdag");
    if (i == j) throw ConstructionError("Cpdag: self loop");
    std::uint8_t& a = seen[static_cast<std::size_t>(i * n + j)];
    std::uint8_t& b = seen[static_cast<std::size_t>(j * n + i)];
    if (a || b) throw ConstructionError("Cpdag: duplicate edge in skeleton");
    a = b = 1;
  }
  for (const auto& [i, j] : undirected) {
    checkNode(n, i, "Cpdag");
    checkNode(n, j, "Cpdag");
    if (i == j) throw ConstructionError("Cpdag: self loop");
    if (i >= j)
      throw ConstructionError("Cpdag: undirected edges must have first < second");
    std::uint8_t& a = seen[static_cast<std::size_t>(i * n + j)];
    std::uint8_t& b = seen[static_cast<std::size_t>(j * n + i)];
    if (a || b) throw ConstructionError("Cpdag: duplicate edge in skeleton");
    a = b = 1;
  }
}

std::string Cpdag::toJsonText() const {
  nlohmann::json j{{"n", n},
                   {"directed", edgesJson(directed)},
                   {"undirected", edgesJson(undirected)}};
  return j.dump(2);
}

Cpdag Cpdag::fromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConstructionError(std::string("Cpdag: bad JSON: ") + e.what());
  }
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ConstructionError("Cpdag: missing integer field n");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "n" && key != "directed" && key != "undirected")
      throw ConstructionError("Cpdag: unknown field '" + key + "'");
  }
  Cpdag c;
  c.n = j["n"].get<int>();
  c.directed = edgesFromJson(j.value("directed", nlohmann::json::array()), "Cpdag");
  c.undirected =
      edgesFromJson(j.value("undirected", nlohmann::json::array()), "Cpdag");
  c.validate();
  return c;
}

std::vector<Dag> enumerateAllDags(int n) {
  if (n < 1) throw PreconditionError("enumerateAllDags: need at least one node");
  if (n > 4)
    throw CapError(
        "enumerateAllDags: capped at 4 nodes; supply a Cpdag and use "
        "enumerateExtensions instead");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  std::vector<Dag> out;
  const std::uint32_t limit = 1u << pairs.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    Dag d = Dag::empty(n);
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask & (1u << b))
        d.adjacency[static_cast<std::size_t>(pairs[b].first * n +
                                             pairs[b].second)] = 1;
    if (d.isAcyclic()) out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::array<int, 3>> vStructures(const Dag& dag) {
  return collidersOf(dag, symmetrized(dag));
}

std::vector<Dag> enumerateExtensions(const Cpdag& cpdag) {
  cpdag.validate();
  if (cpdag.undirected.size() > 20)
    throw CapError("enumerateExtensions: more than 20 undirected edges");
  const int n = cpdag.n;
  Dag base = Dag::empty(n);
  for (const auto& [i, j] : cpdag.directed) base.setEdge(i, j, true);

  std::vector<std::uint8_t> skeleton = symmetrized(base);
  for (const auto& [i, j] : cpdag.undirected) {
    skeleton[static_cast<std::size_t>(i * n + j)] = 1;
    skeleton[static_cast<std::size_t>(j * n + i)] = 1;
  }
  const auto inputColliders = collidersOf(base, skeleton);

  std::vector<Dag> out;
  const std::uint32_t limit = 1u << cpdag.undirected.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    Dag d = base;
    for (std::size_t b = 0; b < cpdag.undirected.size(); ++b) {
      const auto& [i, j] = cpdag.undirected[b];
      if (mask & (1u << b))
        d.setEdge(j, i, true);
      else
        d.setEdge(i, j, true);
    }
    if (!d.isAcyclic()) continue;
    if (collidersOf(d, skeleton) != inputColliders) continue;
    out.push_back(std::move(d));
  }
  return out;
}

const VariableFit* FitCache::find(const Key& key) const {
  const auto it = memo_.find(key);
  return it == memo_.end() ? nullptr : &it->second;
}

void FitCache::store(Key key, VariableFit fit) {
  memo_.emplace(std::move(key), std::move(fit));
}

DagFitReport fitDag(const ColumnBlock& data, const Dag& dag, double alpha,
                    const FitConfig& cfg, FitCache* cache) {
  if (static_cast<int>(data.size()) != dag.n)
    throw PreconditionError("fitDag: column count and node count differ");
  if (!dag.isAcyclic()) throw PreconditionError("fitDag: graph is cyclic");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw PreconditionError("fitDag: alpha outside (0, 1)");

  DagFitReport report;
  report.dag = dag;
  report.edge_count = dag.edgeCount();
  report.accepted = true;
  for (int v = 0; v < dag.n; ++v) {
    VariableFit vf;
    vf.variable = v;
    vf.parents = dag.parentsOf(v);
    if (vf.parents.empty()) {
      vf.independent = true;  // roots carry their own disturbance
      report.per_variable.push_back(std::move(vf));
      continue;
    }
    const FitCache::Key key{v, vf.parents};
    if (cache) {
      if (const VariableFit* hit = cache->find(key)) {
        report.per_variable.push_back(*hit);
        report.accepted = report.accepted && hit->independent;
        continue;
      }
    }
    std::string tag = "dag-fit:v=" + std::to_string(v) + ":pa=";
    for (int p : vf.parents) tag += std::to_string(p) + ",";
    FitConfig fc = cfg;
    fc.alpha = alpha;
    fc.seed = Rng::forStream(cfg.seed, tag).nextU64();
    ColumnBlock parents_block;
    for (int p : vf.parents) parents_block.push_back(data[static_cast<std::size_t>(p)]);
    try {
      vf.fit = fitDirection(parents_block, data[static_cast<std::size_t>(v)], fc);
      vf.independent = vf.fit->hsic.independent;
    } catch (const Error& e) {
      vf.error = e.what();
      vf.independent = false;
    }
    report.accepted = report.accepted && vf.independent;
    if (cache) cache->store(key, vf);
    report.per_variable.push_back(std::move(vf));
  }
  return report;
}

std::optional<DagFitReport> selectModel(
    const std::vector<DagFitReport>& reports) {
  const DagFitReport* best = nullptr;
  std::string best_key;
  for (const auto& r : reports) {
    if (!r.accepted) continue;
    std::string key = r.dag.adjacencyKey();
    if (!best || r.edge_count < best->edge_count ||
        (r.edge_count == best->edge_count && key < best_key)) {
      best = &r;
      best_key = std::move(key);
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

std::string DagFitReport::toJsonText() const {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& vf : per_variable) {
    nlohmann::json row{{"variable", vf.variable},
                       {"parents", vf.parents},
                       {"independent", vf.independent}};
    if (vf.fit) {
      row["hsic"] = {{"statistic", vf.fit->hsic.statistic},
                     {"threshold", vf.fit->hsic.threshold},
                     {"alpha", vf.fit->hsic.alpha},
                     {"independent", vf.fit->hsic.independent},
                     {"n", vf.fit->hsic.n}};
      row["objective"] = vf.fit->objective;
      row["converged"] = vf.fit->converged;
    }
    if (!vf.error.empty()) row["error"] = vf.error;
    vars.push_back(std::move(row));
  }
  nlohmann::json j{{"dag", nlohmann::json::parse(dag.toJsonText())},
                   {"accepted", accepted},
                   {"edge_count", edge_count},
                   {"variables", std::move(vars)}};
  return j.dump(2);
}

}  // namespace pnl
