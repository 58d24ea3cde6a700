#include "pnl/synthetic.hpp"

#include "pnl/errors.hpp"
#include "pnl/rng.hpp"

namespace pnl {

namespace {

void checkCount(int n, const char* what) {
  if (n < 1) throw PreconditionError(std::string(what) + ": n < 1");
}

}  // namespace

PairSample uniformDisturbancePair(int n, std::uint64_t seed) {
  checkCount(n, "uniformDisturbancePair");
  Rng rng = Rng::forStream(seed, "uniform-pair");
  PairSample s;
  s.x1.resize(static_cast<std::size_t>(n));
  s.x2.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double e = rng.uniform(-0.3, 0.3);
    const double u = x + 0.5 * x * x * x + e;
    s.x1[static_cast<std::size_t>(i)] = x;
    s.x2[static_cast<std::size_t>(i)] = u + 0.2 * u * u * u;
  }
  return s;
}

PairSample squareCausePair(int n, std::uint64_t seed) {
  checkCount(n, "squareCausePair");
  Rng rng = Rng::forStream(seed, "square-pair");
  PairSample s;
  s.x1.resize(static_cast<std::size_t>(n));
  s.x2.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s.x1[static_cast<std::size_t>(i)] = x;
    s.x2[static_cast<std::size_t>(i)] = x * x + rng.uniform(-0.5, 0.5);
  }
  return s;
}

ColumnBlock pnlChain3(int n, std::uint64_t seed) {
  checkCount(n, "pnlChain3");
  Rng rng = Rng::forStream(seed, "pnl-chain3");
  ColumnBlock cols(3, std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const double x0 = rng.uniform(-1.0, 1.0);
    const double u1 = x0 + 0.5 * x0 * x0 * x0 + rng.uniform(-0.3, 0.3);
    const double x1 = u1 + 0.2 * u1 * u1 * u1;
    const double u2 = 0.8 * x1 + 0.2 * x1 * x1 * x1 + rng.uniform(-0.5, 0.5);
    const double x2 = u2 + 0.1 * u2 * u2 * u2;
    cols[0][static_cast<std::size_t>(i)] = x0;
    cols[1][static_cast<std::size_t>(i)] = x1;
    cols[2][static_cast<std::size_t>(i)] = x2;
  }
  return cols;
}

}  // namespace pnl
