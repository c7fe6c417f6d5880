#include "gfa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfa {

namespace {

struct Device {
  std::uint32_t id;
  Rational power;
  std::vector<std::uint32_t> rbs;
};

// Devices present in m0, ascending by id, with their RB sets.
std::vector<Device> devices_of(const SignalMatrix& m0) {
  std::vector<Device> devs;
  for (std::uint32_t rb = 0; rb < m0.rbs.size(); ++rb) {
    for (const DecodedSignal& c : m0.rbs[rb].real_components) {
      auto it = std::find_if(devs.begin(), devs.end(),
                             [&](const Device& d) { return d.id == c.device_id; });
      if (it == devs.end()) {
        devs.push_back({c.device_id, c.power, {rb}});
      } else {
        if (!(it->power == c.power))
          throw std::invalid_argument("closure_decode: device power differs across RBs");
        it->rbs.push_back(rb);
      }
    }
  }
  std::sort(devs.begin(), devs.end(), [](const Device& a, const Device& b) { return a.id < b.id; });
  return devs;
}

// One RB under a subtraction set: repeated argmax SIC, no sorting, so the
// control flow does not mirror the decoder module.
void scan_rb_subset(const SignalMatrix& m0, std::uint32_t rb, const std::vector<Device>& devs,
                    std::uint32_t subtracted_mask, const ChannelParams& channel,
                    std::vector<bool>& decodable_out) {
  std::vector<const DecodedSignal*> live;
  Rational ghost_sum(0);
  for (const DecodedSignal& c : m0.rbs[rb].real_components) {
    std::size_t di = 0;
    while (di < devs.size() && devs[di].id != c.device_id) ++di;
    if (di < devs.size() && ((subtracted_mask >> di) & 1u))
      continue;  // cancelled here
    live.push_back(&c);
  }
  for (const Rational& g : m0.rbs[rb].ghost_components) ghost_sum += g;
  for (std::size_t di = 0; di < devs.size(); ++di) {
    if (!((subtracted_mask >> di) & 1u)) continue;
    bool present = std::find(devs[di].rbs.begin(), devs[di].rbs.end(), rb) != devs[di].rbs.end();
    if (!present) ghost_sum += devs[di].power;  // blind subtraction residue
  }

  while (!live.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < live.size(); ++i) {
      if (live[best]->power < live[i]->power ||
          (live[i]->power == live[best]->power && live[i]->device_id < live[best]->device_id))
        best = i;
    }
    bool shared_top = false;
    for (std::size_t i = 0; i < live.size(); ++i)
      if (i != best && live[i]->power == live[best]->power) shared_top = true;
    if (shared_top) break;
    Rational denom = ghost_sum + channel.noise_power;
    for (std::size_t i = 0; i < live.size(); ++i)
      if (i != best) denom += live[i]->power;
    if (!(live[best]->power >= channel.tau * denom)) break;
    for (std::size_t di = 0; di < devs.size(); ++di)
      if (devs[di].id == live[best]->device_id) decodable_out[di] = true;
    live.erase(live.begin() + best);
  }
}

// All devices decodable from m0 after blindly subtracting `mask`.
std::vector<std::uint32_t> scan_all(const SignalMatrix& m0, const std::vector<Device>& devs,
                                    std::uint32_t mask, const ChannelParams& channel) {
  std::vector<bool> hit(devs.size(), false);
  for (std::uint32_t rb = 0; rb < m0.rbs.size(); ++rb)
    scan_rb_subset(m0, rb, devs, mask, channel, hit);
  std::vector<std::uint32_t> out;
  for (std::size_t di = 0; di < devs.size(); ++di)
    if (hit[di]) out.push_back(static_cast<std::uint32_t>(di));
  return out;
}

}  // namespace

ClosureResult closure_decode(const SignalMatrix& m0, const ChannelParams& channel) {
  std::vector<Device> devs = devices_of(m0);
  if (devs.size() > 12) throw std::invalid_argument("closure_decode: more than 12 devices");

  ClosureResult result;
  std::vector<bool> known(devs.size(), false);
  std::vector<std::vector<std::uint32_t>> witness(devs.size());

  // Round 0: no subtraction.
  for (std::uint32_t di : scan_all(m0, devs, 0, channel)) {
    known[di] = true;
    witness[di] = {};
  }

  // Fixpoint: try every subset of the currently known signals.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint32_t> known_list;
    for (std::size_t di = 0; di < devs.size(); ++di)
      if (known[di]) known_list.push_back(static_cast<std::uint32_t>(di));
    std::uint32_t n_subsets = 1u << known_list.size();
    for (std::uint32_t sub = 1; sub < n_subsets; ++sub) {
      std::uint32_t mask = 0;
      for (std::size_t b = 0; b < known_list.size(); ++b)
        if ((sub >> b) & 1u) mask |= 1u << known_list[b];
      for (std::uint32_t di : scan_all(m0, devs, mask, channel)) {
        if (known[di]) continue;
        known[di] = true;
        grew = true;
        for (std::size_t b = 0; b < known_list.size(); ++b)
          if ((sub >> b) & 1u) witness[di].push_back(devs[known_list[b]].id);
      }
    }
  }

  for (std::size_t di = 0; di < devs.size(); ++di) {
    if (!known[di]) continue;
    result.decodable.push_back(devs[di].id);
    result.witness.emplace_back(devs[di].id, witness[di]);
  }
  return result;
}

Rational exact_access_probability(const SystemConfig& config) {
  validate_config(config);
  const std::uint32_t n = config.n_devices;
  const std::uint32_t r = config.n_rbs;
  const std::uint32_t k = config.k_repetitions;
  const std::size_t l = config.pool.levels.size();

  double comb = 1.0;
  for (std::uint32_t i = 0; i < k; ++i) comb = comb * (r - i) / (i + 1);
  double per_device = comb * static_cast<double>(l);
  if (std::pow(per_device, n) > 1e7)
    throw std::invalid_argument("exact_access_probability: enumeration space exceeds 10^7");

  AccessMap map;
  map.devices.resize(n);
  for (std::uint32_t d = 0; d < n; ++d) map.devices[d].device_id = d;

  std::uint64_t decoded_slots = 0;
  std::uint64_t maps_total = 0;

  // Odometer over devices: each position iterates combinations x levels.
  std::vector<std::vector<std::uint32_t>> combo(n);
  std::vector<std::size_t> level(n, 0);
  auto first_combo = [&](std::uint32_t d) {
    combo[d].resize(k);
    for (std::uint32_t i = 0; i < k; ++i) combo[d][i] = i;
  };
  // Lexicographic successor of a K-combination of [0, r); false at the end.
  auto next_combo = [&](std::vector<std::uint32_t>& c) {
    std::uint32_t i = k;
    while (i > 0) {
      --i;
      if (c[i] + (k - i) < r) {
        ++c[i];
        for (std::uint32_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  for (std::uint32_t d = 0; d < n; ++d) first_combo(d);

  while (true) {
    for (std::uint32_t d = 0; d < n; ++d) {
      map.devices[d].rb_choices = combo[d];
      map.devices[d].power_level = config.pool.levels[level[d]];
    }
    SignalMatrix m0 = superpose(map, config);
    decoded_slots += closure_decode(m0, config.channel).decodable.size();
    ++maps_total;

    // Advance the odometer: level first, then combination, rippling up.
    std::uint32_t d = 0;
    for (; d < n; ++d) {
      if (++level[d] < l) break;
      level[d] = 0;
      if (next_combo(combo[d])) break;
      first_combo(d);
    }
    if (d == n) break;
  }

  return Rational(static_cast<std::int64_t>(decoded_slots),
                  static_cast<std::int64_t>(maps_total) * n);
}

}  // namespace gfa
