#ifndef PNL_DAG_HPP
#define PNL_DAG_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnl/nlica.hpp"

namespace pnl {

// Directed acyclic graph over labeled nodes 0..n-1.
struct Dag {
  int n = 0;
  std::vector<std::uint8_t> adjacency;  // row-major n*n; (i,j) set means i->j

  static Dag empty(int n);
  bool edge(int i, int j) const {
    return adjacency[static_cast<std::size_t>(i * n + j)] != 0;
  }
  void setEdge(int i, int j, bool on);
  int edgeCount() const;
  std::vector<int> parentsOf(int v) const;
  // Node order with every edge pointing forward; empty when cyclic.
  std::optional<std::vector<int>> topologicalOrder() const;
  bool isAcyclic() const { return topologicalOrder().has_value(); }
  // Row-major '0'/'1' string; the tie-break encoding used by selectModel.
  std::string adjacencyKey() const;
  std::string toJsonText() const;
  static Dag fromJsonText(const std::string& text);
  bool operator==(const Dag&) const = default;
};

// Partially directed graph: a skeleton whose edges are either directed or
// undirected, standing for a set of candidate orientations.
struct Cpdag {
  int n = 0;
  std::vector<std::pair<int, int>> directed;
  std::vector<std::pair<int, int>> undirected;  // stored with first < second

  void validate() const;  // throws ConstructionError on malformed input
  std::string toJsonText() const;
  static Cpdag fromJsonText(const std::string& text);
};

// Every labeled DAG on n nodes in deterministic (adjacency bitmask) order.
// Hard cap n <= 4: the count grows super-exponentially, use extensions of a
// Cpdag beyond that.
std::vector<Dag> enumerateAllDags(int n);

// All orientations of the undirected edges that are acyclic and create no
// unshielded collider absent from the input's directed part; deterministic
// order. No consistent orientation yields an empty list.
std::vector<Dag> enumerateExtensions(const Cpdag& cpdag);

// Unshielded colliders a->c<-b (a < b, a and b non-adjacent), used both by
// the extension filter and by equivalence tests.
std::vector<std::array<int, 3>> vStructures(const Dag& dag);

struct VariableFit {
  int variable = 0;
  std::vector<int> parents;
  std::optional<PnlFitResult> fit;  // absent for roots or failed fits
  bool independent = false;
  std::string error;
};

struct DagFitReport {
  Dag dag;
  std::vector<VariableFit> per_variable;
  bool accepted = false;
  int edge_count = 0;

  std::string toJsonText() const;
};

// Memo for per-variable fits shared across DAGs over the same data, alpha,
// and config; keyed by (variable, parent set) only, so reuse it for exactly
// one such combination.
class FitCache {
 public:
  using Key = std::pair<int, std::vector<int>>;
  const VariableFit* find(const Key& key) const;
  void store(Key key, VariableFit fit);

 private:
  std::map<Key, VariableFit> memo_;
};

// Fits every variable with parents against its parent block and tests the
// residuals for independence of the parents; the report is accepted when all
// such tests accept. Roots never invoke the fitter. Per-variable seeds are
// derived from (cfg.seed, variable, parent set), so cached and uncached runs
// agree bit for bit.
DagFitReport fitDag(const ColumnBlock& data, const Dag& dag, double alpha,
                    const FitConfig& cfg = {}, FitCache* cache = nullptr);

// Among accepted reports: minimum edge count, ties broken by the
// lexicographically smallest adjacency key. Empty when none accepted.
std::optional<DagFitReport> selectModel(const std::vector<DagFitReport>& reports);

}  // namespace pnl

#endif  // PNL_DAG_HPP
