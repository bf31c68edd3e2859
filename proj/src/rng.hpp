#ifndef ARQG_RNG_HPP
#define ARQG_RNG_HPP

#include <cmath>
#include <cstdint>

namespace arqg {

// 64-bit finalizer from SplitMix64 (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Counter-addressable generator: output i is mix64(seed + (i+1)*golden),
// i.e. a SplitMix64 stream that can also be indexed randomly. The mapping
// is fixed for the lifetime of the project so that seeded runs reproduce
// bit-identically across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Independent substream: decorrelates (seed, stream) pairs by double mixing.
  static CounterRng substream(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(mix64(seed + kGolden) ^ mix64((stream + 1) * kGolden));
  }

  std::uint64_t at(std::uint64_t i) const { return mix64(seed_ + (i + 1) * kGolden); }

  std::uint64_t next_u64() { return at(counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exponential with the given rate; uses -log1p(-u) so u = 0 is safe.
  double exponential(double rate) { return -std::log1p(-next_double()) / rate; }

  // Poisson by summing unit exponentials until the mean is exceeded.
  // Exact for any mean and free of the underflow the product form hits.
  std::uint64_t poisson(double mean) {
    std::uint64_t n = 0;
    double acc = exponential(1.0);
    while (acc <= mean) {
      ++n;
      acc += exponential(1.0);
    }
    return n;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace arqg

#endif
