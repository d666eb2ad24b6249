#ifndef SIU_RNG_HPP
#define SIU_RNG_HPP

#include <cmath>
#include <cstdint>

namespace siu {

// splitmix64 finalizer; bit-exact on every platform.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (parent seed, stream index).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Counter-based generator: the k-th draw depends only on (seed, k), so any
// consumer can be evaluated out of order or in parallel without changing
// results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_bits() { return splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in (0, 1]; never returns 0 so log(u) is always finite.
  double uniform() {
    return static_cast<double>((next_bits() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. std::normal_distribution is
  // implementation-defined, which would break byte-identical replays.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Index in [0, n) with rejection sampling, bias-free.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_bits();
    while (x >= limit) x = next_bits();
    return x % n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace siu

#endif  // SIU_RNG_HPP
