#pragma once

#include <cstdint>
#include <span>

namespace gfa {

// Complexity accounting. Units: one wr op = one RB-cell read or write; one
// dec op = one per-RB SIC pass; one storage item = one buffered RB-cell or
// one MAI signal. peak_storage is the high-water mark sampled at iteration
// boundaries (frontier cells + pool).
struct Counters {
  std::uint64_t wr_ops = 0;
  std::uint64_t dec_ops = 0;
  std::uint64_t peak_storage = 0;

  // Aggregation for averaging across windows: plain sums. Associative and
  // commutative, so merge order never changes totals.
  Counters& operator+=(const Counters& o) {
    wr_ops += o.wr_ops;
    dec_ops += o.dec_ops;
    peak_storage += o.peak_storage;
    return *this;
  }
};

// Worst-case reference operation counts (exact counts, not O-constants, so
// tests can assert measured <= bound without fudge factors).
struct BoundProfile {
  std::uint64_t wr_ops = 0;
  std::uint64_t dec_ops = 0;
  std::uint64_t peak_storage = 0;
};

// Two-iteration worst case: N-1 devices recovered from the first scan, the
// last one via N-1 single-subtraction branches. Requires n >= 2.
BoundProfile bound_alpha2(std::uint32_t n, std::uint32_t r);

// Depth-alpha worst case. alpha=1 is the single-matrix case, alpha=2
// defers to bound_alpha2; for alpha >= 3 requires n >= 2*alpha + 2:
//   sto = R * sum_{b=1}^{alpha-1} C(n-2, b-1) + n
//   wr  = 2R * sum_{i=2}^{alpha} C(n-1, i-1)
//   dec =  R + R * sum_{i=2}^{alpha} C(n-1, i-1)
// The wr/dec sums use C(n-1,.) because the MAI pool of a live expansion
// holds up to n-1 signals; at alpha=2 they reduce to bound_alpha2 exactly.
BoundProfile bound_general(std::uint32_t alpha, std::uint32_t n, std::uint32_t r);

// Full-depth (alpha = n) worst cases: the storage-heavy profile doubles
// matrices per iteration over n-1 iterations; the width-heavy profile runs
// the C(n-2, i-1) expansion over n-2 iterations. Callers take the max.
struct AlphaNBounds {
  BoundProfile storage_worst;
  BoundProfile width_worst;

  BoundProfile combined() const {
    auto mx = [](std::uint64_t a, std::uint64_t b) { return a > b ? a : b; };
    return {mx(storage_worst.wr_ops, width_worst.wr_ops),
            mx(storage_worst.dec_ops, width_worst.dec_ops),
            mx(storage_worst.peak_storage, width_worst.peak_storage)};
  }
};
AlphaNBounds bound_alphaN(std::uint32_t n, std::uint32_t r);

// Pooled per-device Bernoulli estimate over windows.
struct AccessStat {
  double mean_access_prob = 0.0;
  double ci95_halfwidth = 0.0;
  std::uint64_t windows = 0;
};

// decoded_counts[w] = number of devices decoded in window w, out of n.
// CI from the binomial normal approximation over windows*n outcomes.
AccessStat estimate_access(std::span<const std::uint32_t> decoded_counts, std::uint32_t n);

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

}  // namespace gfa
