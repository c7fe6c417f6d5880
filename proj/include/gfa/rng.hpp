#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace gfa {

// splitmix64 finalizer; used to derive stream seeds so that
// (base, index) pairs land far apart in mt19937_64 seed space.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index + 0x632be59bd9b4e019ull));
}

// Deterministic across platforms: mt19937_64 output is pinned by the
// standard, and bounded draws below avoid std::uniform_int_distribution,
// whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from [0, n) via Lemire's multiply-shift with rejection.
  std::uint32_t below(std::uint32_t n) {
    std::uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
      while (lo < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 64);
  }

  // K distinct values from [0, n), ascending. Partial Fisher-Yates over a
  // caller-provided scratch buffer so hot loops do not reallocate.
  void sample_distinct(std::uint32_t n, std::uint32_t k, std::vector<std::uint32_t>& scratch,
                       std::vector<std::uint32_t>& out);

 private:
  std::mt19937_64 engine_;
};

inline void Rng::sample_distinct(std::uint32_t n, std::uint32_t k,
                                 std::vector<std::uint32_t>& scratch,
                                 std::vector<std::uint32_t>& out) {
  scratch.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) scratch[i] = i;
  out.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t j = i + below(n - i);
    std::swap(scratch[i], scratch[j]);
    out[i] = scratch[i];
  }
  std::sort(out.begin(), out.end());
}

}  // namespace gfa
