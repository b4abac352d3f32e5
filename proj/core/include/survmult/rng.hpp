#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace survmult {

// Stateless 64-bit mixer used to derive independent stream seeds from a
// master seed. Two distinct (seed, index) pairs yield unrelated streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Deterministic pseudo-random stream.
//
// The engine is std::mt19937_64, which the standard pins bit-for-bit; all
// sampling helpers are built from raw 64-bit draws because the standard
// <random> distributions are implementation-defined and would break the
// reproducibility contract across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream `index` of a master seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix_seed(seed, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 bits of precision.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi). Requires lo < hi.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer in {0, ..., n-1}, unbiased (rejection sampling).
  // Requires n >= 1.
  std::size_t below(std::size_t n);

  // k distinct values from {0, ..., n-1} in draw order (partial
  // Fisher-Yates). Requires k <= n.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  // Permutation of {0, ..., n-1} (full Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n) {
    return sample_without_replacement(n, n);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace survmult
