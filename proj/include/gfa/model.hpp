#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gfa/rational.hpp"

namespace gfa {

// Receiver-side channel constants. tau is the SINR threshold a component
// must meet (>=) to decode; noise_power is the additive noise floor.
struct ChannelParams {
  Rational tau{1};
  Rational noise_power{1};
};

// Transmit power levels, strictly increasing. Level i is chosen uniformly
// by each transmitting device.
struct PowerPool {
  std::vector<Rational> levels;

  std::size_t size() const { return levels.size(); }
};

// Builds the pool from the recurrence P_i = tau * (sum of all lower levels
// + noise), which makes every level decodable against the combined
// interference of all lower levels. tau=1, noise=1, 3 levels gives {1,2,4}.
PowerPool build_power_pool(std::size_t n_levels, const ChannelParams& channel);

// Max decode iterations. Either a finite count >= 1 or unbounded.
class Alpha {
 public:
  constexpr Alpha() = default;
  static constexpr Alpha finite(std::uint32_t v) { return Alpha(v); }
  static constexpr Alpha unbounded() { return Alpha(kInf); }

  constexpr bool is_unbounded() const { return raw_ == kInf; }
  // Valid only when finite.
  constexpr std::uint32_t value() const { return raw_; }

  std::string str() const { return is_unbounded() ? "inf" : std::to_string(raw_); }
  static Alpha parse(const std::string& text);  // "3" or "inf"

  friend bool operator==(Alpha a, Alpha b) { return a.raw_ == b.raw_; }
  friend bool operator!=(Alpha a, Alpha b) { return a.raw_ != b.raw_; }
  // Unbounded compares greater than any finite value.
  friend bool operator<(Alpha a, Alpha b) { return a.raw_ < b.raw_; }

 private:
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  explicit constexpr Alpha(std::uint32_t raw) : raw_(raw) {}
  std::uint32_t raw_ = kInf;
};

// One full scenario: N devices, R resource blocks per window, K replicas
// per device, decode depth alpha, channel and pool, Monte Carlo controls.
struct SystemConfig {
  std::uint32_t n_devices = 0;
  std::uint32_t n_rbs = 0;
  std::uint32_t k_repetitions = 0;
  Alpha alpha = Alpha::unbounded();
  ChannelParams channel;
  PowerPool pool;
  std::uint64_t windows = 1;
  std::uint64_t seed = 0;

  double gamma() const {
    return static_cast<double>(n_devices) / static_cast<double>(n_rbs);
  }
};

// Throws std::invalid_argument listing every violated constraint
// (n >= 1, r >= 1, 1 <= k <= r, finite alpha >= 1, tau > 0, noise > 0,
// nonempty strictly increasing positive pool, windows >= 1).
void validate_config(const SystemConfig& config);

// A successfully decoded component: which device, at which power.
struct DecodedSignal {
  std::uint32_t device_id = 0;
  Rational power;

  friend bool operator==(const DecodedSignal& a, const DecodedSignal& b) {
    return a.device_id == b.device_id && a.power == b.power;
  }
};

}  // namespace gfa
