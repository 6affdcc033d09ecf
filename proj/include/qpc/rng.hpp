#pragma once

#include <cstdint>
#include <random>

#include "qpc/types.hpp"

namespace qpc {

// splitmix64, used to decorrelate derived seeds before feeding mt19937_64.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic per-seed random stream. Every generator in the library takes
// an explicit seed, so parallel shards reproduce the serial results exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  double uniform() { return unif_(gen_); }          // [0, 1)
  double gaussian() { return norm_(gen_); }         // N(0, 1)
  std::uint64_t next_u64() { return gen_(); }

  // integer in [0, n)
  int below(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(gen_));
  }

  cplx cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  // Independent substream identified by `stream`; insensitive to how much of
  // the parent stream has been consumed.
  Rng fork(std::uint64_t stream) const {
    return Rng(mix64(seed_ ^ mix64(stream + 1)));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace qpc
