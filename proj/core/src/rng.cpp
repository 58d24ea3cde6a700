#include "pnl/rng.hpp"

#include <cmath>

namespace pnl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

Rng Rng::forStream(std::uint64_t seed, std::string_view tag) {
  return Rng(splitmix64(seed ^ fnv1a(tag)));
}

std::uint64_t Rng::nextU64() { return gen_(); }

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  for (;;) {
    double u = 2.0 * uniform() - 1.0;
    double v = 2.0 * uniform() - 1.0;
    double r2 = u * u + v * v;
    if (r2 > 0.0 && r2 < 1.0) {
      return u * std::sqrt(-2.0 * std::log(r2) / r2);
    }
  }
}

std::size_t Rng::index(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace pnl
