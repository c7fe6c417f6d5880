#include "gfa/model.hpp"

#include <stdexcept>

namespace gfa {

PowerPool build_power_pool(std::size_t n_levels, const ChannelParams& channel) {
  if (channel.tau <= Rational(0)) throw std::invalid_argument("power pool: tau must be > 0");
  if (channel.noise_power <= Rational(0))
    throw std::invalid_argument("power pool: noise_power must be > 0");
  PowerPool pool;
  pool.levels.reserve(n_levels);
  Rational below = channel.noise_power;  // running sum of lower levels + noise
  for (std::size_t i = 0; i < n_levels; ++i) {
    Rational level = channel.tau * below;
    pool.levels.push_back(level);
    below += level;
  }
  return pool;
}

Alpha Alpha::parse(const std::string& text) {
  if (text == "inf") return Alpha::unbounded();
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("alpha: expected positive integer or 'inf', got '" + text + "'");
  }
  if (pos != text.size() || v == 0 || v >= kInf)
    throw std::invalid_argument("alpha: expected positive integer or 'inf', got '" + text + "'");
  return Alpha::finite(static_cast<std::uint32_t>(v));
}

void validate_config(const SystemConfig& config) {
  std::string errors;
  auto fail = [&errors](const std::string& msg) {
    if (!errors.empty()) errors += "; ";
    errors += msg;
  };

  if (config.n_devices < 1) fail("n_devices must be >= 1");
  if (config.n_rbs < 1) fail("n_rbs must be >= 1");
  if (config.k_repetitions < 1)
    fail("k_repetitions must be >= 1");
  else if (config.n_rbs >= 1 && config.k_repetitions > config.n_rbs)
    fail("k_repetitions must be <= n_rbs");
  if (!config.alpha.is_unbounded() && config.alpha.value() < 1) fail("alpha must be >= 1 or inf");
  if (config.channel.tau <= Rational(0)) fail("tau must be > 0");
  if (config.channel.noise_power <= Rational(0)) fail("noise_power must be > 0");
  if (config.pool.levels.empty()) fail("power pool must be nonempty");
  for (std::size_t i = 0; i < config.pool.levels.size(); ++i) {
    if (config.pool.levels[i] <= Rational(0)) {
      fail("power pool levels must be positive");
      break;
    }
  }
  for (std::size_t i = 1; i < config.pool.levels.size(); ++i) {
    if (!(config.pool.levels[i - 1] < config.pool.levels[i])) {
      fail("power pool levels must be strictly increasing");
      break;
    }
  }
  if (config.windows < 1) fail("windows must be >= 1");

  if (!errors.empty()) throw std::invalid_argument("invalid config: " + errors);
}

}  // namespace gfa
