#pragma once

#include "gfa/framegen.hpp"
#include "gfa/model.hpp"

namespace gfa::testfix {

// Five devices over R=10, K=3, all at level 1. Devices 0,1,2 share RB 1;
// device 2 has no exclusive RB and becomes reachable only after blindly
// subtracting 0 and 1, which needs a third iteration.
inline AccessMap chain_map() {
  AccessMap map;
  map.devices = {
      {0, {0, 1, 6}, Rational(1)},
      {1, {1, 7, 9}, Rational(1)},
      {2, {1, 2, 3}, Rational(1)},
      {3, {2, 3, 4}, Rational(1)},
      {4, {2, 3, 5}, Rational(1)},
  };
  return map;
}

inline SystemConfig chain_config(Alpha alpha) {
  SystemConfig c;
  c.n_devices = 5;
  c.n_rbs = 10;
  c.k_repetitions = 3;
  c.alpha = alpha;
  c.pool = build_power_pool(3, c.channel);
  return c;
}

}  // namespace gfa::testfix
