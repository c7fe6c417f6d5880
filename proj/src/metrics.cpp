#include "gfa/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace gfa {

namespace {

std::uint64_t checked_u64(__uint128_t v, const char* what) {
  if (v > UINT64_MAX) throw std::overflow_error(what);
  return static_cast<std::uint64_t>(v);
}

std::uint64_t mul_u64(std::uint64_t a, std::uint64_t b, const char* what) {
  return checked_u64(static_cast<__uint128_t>(a) * b, what);
}

std::uint64_t add_u64(std::uint64_t a, std::uint64_t b, const char* what) {
  return checked_u64(static_cast<__uint128_t>(a) + b, what);
}

// C(n, k) with overflow checking.
std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  __uint128_t acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i);
    if (acc > static_cast<__uint128_t>(UINT64_MAX) * i) throw std::overflow_error("binom overflow");
    acc /= i;
  }
  return checked_u64(acc, "binom overflow");
}

std::uint64_t pow2(std::uint32_t e, const char* what) {
  if (e >= 64) throw std::overflow_error(what);
  return std::uint64_t{1} << e;
}

}  // namespace

BoundProfile bound_alpha2(std::uint32_t n, std::uint32_t r) {
  if (n < 1 || r < 1) throw std::invalid_argument("bound_alpha2: n, r must be >= 1");
  std::uint64_t branches = n - 1;  // one IC branch per MAI signal
  BoundProfile b;
  b.wr_ops = mul_u64(2 * static_cast<std::uint64_t>(r), branches, "bound_alpha2 overflow");
  b.dec_ops = add_u64(mul_u64(r, branches, "bound_alpha2 overflow"), r, "bound_alpha2 overflow");
  b.peak_storage = add_u64(r, branches, "bound_alpha2 overflow");
  return b;
}

BoundProfile bound_general(std::uint32_t alpha, std::uint32_t n, std::uint32_t r) {
  if (alpha < 1 || n < 1 || r < 1)
    throw std::invalid_argument("bound_general: alpha, n, r must be >= 1");
  if (alpha == 1) return {0, r, add_u64(r, n, "bound_general overflow")};
  if (alpha == 2) return bound_alpha2(n, r);
  if (n < 2 * alpha + 2)
    throw std::invalid_argument("bound_general: requires n >= 2*alpha + 2 for alpha >= 3");

  std::uint64_t buffered = 0;  // sum_{b=1}^{alpha-1} C(n-2, b-1)
  for (std::uint32_t b = 1; b <= alpha - 1; ++b)
    buffered = add_u64(buffered, binom(n - 2, b - 1), "bound_general overflow");
  std::uint64_t processed = 0;  // sum_{i=2}^{alpha} C(n-1, i-1)
  for (std::uint32_t i = 2; i <= alpha; ++i)
    processed = add_u64(processed, binom(n - 1, i - 1), "bound_general overflow");

  BoundProfile out;
  out.peak_storage =
      add_u64(mul_u64(r, buffered, "bound_general overflow"), n, "bound_general overflow");
  out.wr_ops = mul_u64(2 * static_cast<std::uint64_t>(r), processed, "bound_general overflow");
  out.dec_ops = add_u64(mul_u64(r, processed, "bound_general overflow"), r, "bound_general overflow");
  return out;
}

AlphaNBounds bound_alphaN(std::uint32_t n, std::uint32_t r) {
  if (n < 2 || r < 1) throw std::invalid_argument("bound_alphaN: requires n >= 2, r >= 1");
  AlphaNBounds out;
  if (n == 2) {
    // Full depth at two devices is the single-branch two-iteration case.
    out.storage_worst = bound_alpha2(2, r);
    out.width_worst = out.storage_worst;
    return out;
  }

  // Storage-heavy: n-1 iterations, 2^(i-1) matrices born in iteration i.
  {
    std::uint64_t borns = pow2(n - 1, "bound_alphaN overflow") - 2;  // sum_{i=2}^{n-1} 2^(i-1)
    BoundProfile& p = out.storage_worst;
    p.wr_ops = mul_u64(2 * static_cast<std::uint64_t>(r), borns, "bound_alphaN overflow");
    p.dec_ops = mul_u64(r, borns + 1, "bound_alphaN overflow");
    p.peak_storage = add_u64(mul_u64(r, pow2(n - 2, "bound_alphaN overflow"), "bound_alphaN overflow"),
                             n - 1, "bound_alphaN overflow");
  }

  // Width-heavy: n-2 iterations of the C(n-2, i-1) expansion.
  {
    std::uint64_t borns = 0;
    std::uint64_t buffered = 1;  // M0
    for (std::uint32_t i = 2; i + 2 <= n; ++i) {
      std::uint64_t c = binom(n - 2, i - 1);
      borns = add_u64(borns, c, "bound_alphaN overflow");
      if (i + 3 <= n)  // matrices of the last iteration are scan-transients
        buffered = add_u64(buffered, c, "bound_alphaN overflow");
    }
    BoundProfile& p = out.width_worst;
    p.wr_ops = mul_u64(2 * static_cast<std::uint64_t>(r), borns, "bound_alphaN overflow");
    p.dec_ops = mul_u64(r, borns + 1, "bound_alphaN overflow");
    p.peak_storage =
        add_u64(mul_u64(r, buffered, "bound_alphaN overflow"), n - 2, "bound_alphaN overflow");
  }
  return out;
}

AccessStat estimate_access(std::span<const std::uint32_t> decoded_counts, std::uint32_t n) {
  if (decoded_counts.empty()) throw std::invalid_argument("estimate_access: no outcomes");
  if (n < 1) throw std::invalid_argument("estimate_access: n must be >= 1");
  std::uint64_t decoded_total = 0;
  for (std::uint32_t c : decoded_counts) decoded_total += c;
  auto windows = static_cast<std::uint64_t>(decoded_counts.size());
  double trials = static_cast<double>(windows) * n;
  double p = static_cast<double>(decoded_total) / trials;
  AccessStat stat;
  stat.mean_access_prob = p;
  stat.ci95_halfwidth = kZ95 * std::sqrt(p * (1.0 - p) / trials);
  stat.windows = windows;
  return stat;
}

}  // namespace gfa
