#ifndef PNL_RNG_HPP
#define PNL_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace pnl {

// Deterministic random source. All randomness in the library flows through
// this class so that a (seed, stream tag) pair fully reproduces a run.
// Streams derived from the same seed with different tags are independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derives an independent child stream from a seed and a textual tag.
  static Rng forStream(std::uint64_t seed, std::string_view tag);

  std::uint64_t nextU64();

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via the polar method; uses only uniform draws.
  double normal();

  // Uniform index in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 gen_;
};

}  // namespace pnl

#endif  // PNL_RNG_HPP
