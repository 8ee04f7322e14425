#pragma once

// Portable draws on top of std::mt19937_64, whose raw output sequence is fixed
// by the standard. The std distributions are implementation-defined, so they
// are avoided wherever results must replay across toolchains.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace pejor::rnd {

using Engine = std::mt19937_64;

inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline std::size_t index(Engine& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline bool bernoulli(Engine& rng, double p) { return uniform01(rng) < p; }

inline double normal(Engine& rng) {
  // Box-Muller; one of the pair is discarded.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

template <typename T>
void shuffle(std::span<T> items, Engine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

template <typename Container>
const auto& pick(const Container& c, Engine& rng) {
  return c[index(rng, c.size())];
}

}  // namespace pejor::rnd
