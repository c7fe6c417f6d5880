#include "gfa/framegen.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace gfa {

AccessMap generate_access_map(const SystemConfig& config, Rng& rng) {
  AccessMap map;
  std::vector<std::uint32_t> scratch;
  generate_access_map_into(config, rng, scratch, map);
  return map;
}

void generate_access_map_into(const SystemConfig& config, Rng& rng,
                              std::vector<std::uint32_t>& scratch, AccessMap& map) {
  map.devices.resize(config.n_devices);
  auto n_levels = static_cast<std::uint32_t>(config.pool.levels.size());
  for (std::uint32_t id = 0; id < config.n_devices; ++id) {
    DeviceAccess& dev = map.devices[id];
    dev.device_id = id;
    rng.sample_distinct(config.n_rbs, config.k_repetitions, scratch, dev.rb_choices);
    dev.power_level = config.pool.levels[rng.below(n_levels)];
  }
}

SignalMatrix superpose(const AccessMap& map, const SystemConfig& config) {
  SignalMatrix m;
  m.rbs.resize(config.n_rbs);
  for (const DeviceAccess& dev : map.devices) {
    for (std::uint32_t rb : dev.rb_choices) {
      if (rb >= config.n_rbs) throw std::invalid_argument("superpose: rb index out of range");
      m.rbs[rb].real_components.push_back({dev.device_id, dev.power_level});
    }
  }
  // Device order within an RB is part of the deterministic byte contract.
  for (RbSignal& rb : m.rbs) {
    std::sort(rb.real_components.begin(), rb.real_components.end(),
              [](const DecodedSignal& a, const DecodedSignal& b) {
                return a.device_id < b.device_id;
              });
  }
  return m;
}

namespace {

nlohmann::ordered_json power_to_json(const Rational& p) {
  if (p.is_integer()) return p.num();
  return p.str();
}

Rational power_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw std::invalid_argument("access map: power must be integer or \"p/q\" string");
}

}  // namespace

std::string access_map_to_json(const AccessMap& map) {
  nlohmann::ordered_json devices = nlohmann::ordered_json::array();
  for (const DeviceAccess& dev : map.devices) {
    nlohmann::ordered_json d;
    d["id"] = dev.device_id;
    d["rbs"] = dev.rb_choices;
    d["power"] = power_to_json(dev.power_level);
    devices.push_back(std::move(d));
  }
  nlohmann::ordered_json root;
  root["devices"] = std::move(devices);
  return root.dump();
}

AccessMap access_map_from_json(const std::string& text) {
  nlohmann::json root = nlohmann::json::parse(text);
  if (!root.contains("devices") || !root["devices"].is_array())
    throw std::invalid_argument("access map: missing devices array");
  AccessMap map;
  for (const auto& d : root["devices"]) {
    DeviceAccess dev;
    dev.device_id = d.at("id").get<std::uint32_t>();
    dev.rb_choices = d.at("rbs").get<std::vector<std::uint32_t>>();
    dev.power_level = power_from_json(d.at("power"));
    map.devices.push_back(std::move(dev));
  }
  for (std::size_t i = 0; i < map.devices.size(); ++i) {
    if (map.devices[i].device_id != i)
      throw std::invalid_argument("access map: device ids must be 0..N-1 in order");
  }
  return map;
}

}  // namespace gfa
