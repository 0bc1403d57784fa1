#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace dagfoci::rng {

// SplitMix64 step (Vigna 2015). Advances state and returns the next output.
// Doubles as the avalanche function for key mixing below.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic key derivation: every independent random stream in the
// library is seeded with mix(parent_seed, tag...) so that unrelated
// computations never share a stream and reruns are bit-reproducible.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

template <typename... Rest>
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix(mix(a, b), static_cast<std::uint64_t>(rest)...);
}

// FNV-1a, for keying streams by column or node name.
inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Lemire multiply-shift; the O(bound/2^64)
  // bias is far below anything observable at the bounds used here.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Standard normal via Box-Muller. Hand-rolled because
  // std::normal_distribution is not reproducible across standard libraries.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// One deterministic pick among `count` tied candidates, keyed by row so that
// ties at different rows resolve independently.
inline std::uint64_t tie_pick(std::uint64_t seed, std::uint64_t row,
                              std::uint64_t count) {
  Stream s(mix(seed, row));
  return s.below(count);
}

// Fisher-Yates permutation of 0..n-1.
inline std::vector<std::uint32_t> random_permutation(std::size_t n,
                                                     std::uint64_t seed) {
  std::vector<std::uint32_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  Stream s(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(s.below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace dagfoci::rng
