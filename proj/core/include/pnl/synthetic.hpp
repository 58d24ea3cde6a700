#ifndef PNL_SYNTHETIC_HPP
#define PNL_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "pnl/hsic.hpp"

namespace pnl {

struct PairSample {
  std::vector<double> x1, x2;
};

// Smooth invertible mechanism with uniform disturbance and a mild
// post-nonlinearity; the direction is identifiable.
PairSample uniformDisturbancePair(int n, std::uint64_t seed);

// Non-invertible square mechanism with uniform disturbance; identifiable.
PairSample squareCausePair(int n, std::uint64_t seed);

// Three-variable chain 0 -> 1 -> 2, uniform disturbances, mild
// post-nonlinearities on both links; every link is identifiable.
ColumnBlock pnlChain3(int n, std::uint64_t seed);

}  // namespace pnl

#endif  // PNL_SYNTHETIC_HPP
