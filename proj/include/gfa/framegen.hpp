#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfa/model.hpp"
#include "gfa/rng.hpp"

namespace gfa {

// One device's transmission plan for a window: K distinct RBs, one power
// level shared by all K replicas.
struct DeviceAccess {
  std::uint32_t device_id = 0;
  std::vector<std::uint32_t> rb_choices;  // ascending, size K
  Rational power_level;
};

// Ground truth for a window. devices[i].device_id == i.
struct AccessMap {
  std::vector<DeviceAccess> devices;
};

// Received signal on one RB. real_components carry device identity (the
// receiver can use it only after a successful decode); ghost_components are
// anonymous residual powers left by subtracting signals that were never
// transmitted here.
struct RbSignal {
  std::vector<DecodedSignal> real_components;  // sorted by device_id
  std::vector<Rational> ghost_components;
};

// A (possibly interference-cancelled) view of the whole window.
// lineage lists the device ids blindly subtracted to produce it, sorted;
// the original superposition has empty lineage and born_iteration 0.
struct SignalMatrix {
  std::vector<RbSignal> rbs;
  std::vector<std::uint32_t> lineage;
  std::uint32_t born_iteration = 0;
};

// Draws each device's K RBs (uniform over the C(R,K) subsets) and power
// level (uniform over the pool). Consumes the generator in device order:
// RB draws first, then the level draw.
AccessMap generate_access_map(const SystemConfig& config, Rng& rng);

// Same draw, overwriting map in place; scratch and the per-device buffers
// keep their capacity, so Monte Carlo loops do not allocate.
void generate_access_map_into(const SystemConfig& config, Rng& rng,
                              std::vector<std::uint32_t>& scratch, AccessMap& map);

// The receiver's initial matrix M0: every replica placed on its RB.
SignalMatrix superpose(const AccessMap& map, const SystemConfig& config);

// JSON round-trip for fixtures. Schema per device:
//   {"id":0,"rbs":[1,4,7],"power":4}
// with "power" a JSON integer when integral, else an exact "p/q" string.
std::string access_map_to_json(const AccessMap& map);
AccessMap access_map_from_json(const std::string& text);

}  // namespace gfa
