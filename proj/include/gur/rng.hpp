#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace gur {

// Deterministic seeded generator. Per-trial generators are derived from a
// root seed and a trial counter so trials are independent and replayable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // splitmix64 mix of (seed, stream), used to split one seed into
  // independent per-trial seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  std::complex<double> normal_complex() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gur
