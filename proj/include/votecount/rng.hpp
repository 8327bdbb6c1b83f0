#pragma once

#include <cstdint>

namespace votecount {

// Counter-based generator: output t depends only on (key, t), so streams
// keyed by (seed, replication, example, purpose) are reproducible
// regardless of thread schedule.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t s1 = 0,
                      std::uint64_t s2 = 0, std::uint64_t s3 = 0)
      : key_(derive_key(seed, s1, s2, s3)) {}

  std::uint64_t next_u64() {
    std::uint64_t x = key_ + counter_ * 0x9e3779b97f4a7c15ULL;
    ++counter_;
    return mix(mix(x) ^ key_);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    // rejection keeps the draw unbiased
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t s1,
                                  std::uint64_t s2, std::uint64_t s3) {
    std::uint64_t k = mix(seed + 0x2545f4914f6cdd1dULL);
    k = mix(k ^ s1);
    k = mix(k ^ s2);
    k = mix(k ^ s3);
    return k;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace votecount
