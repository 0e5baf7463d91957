#pragma once

#include <cstdint>
#include <initializer_list>

namespace condgreedy {

/// Counter-based generator: the stream is a pure function of (seed, keys),
/// so sample i of a search is the same whether it runs first, last, or on
/// another thread.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) : state_(mix(seed ^ 0x9E3779B97F4A7C15ULL)) {
    for (std::uint64_t k : keys) state_ = mix(state_ ^ mix(k + 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t next() {  // splitmix64 step
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1}; n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Stream tags so different estimators never share samples.
enum class Stream : std::uint64_t { LmRandom = 1, KmRandom, QuasiGreedy, AlmostGreedy, Fundamental, Scenario };

}  // namespace condgreedy
