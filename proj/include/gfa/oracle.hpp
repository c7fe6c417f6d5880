#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gfa/framegen.hpp"
#include "gfa/model.hpp"

namespace gfa {

// Brute-force references for small instances. Both functions are written
// independently of the decoder module's branching code so the two can
// disagree if either is wrong.

struct ClosureResult {
  std::vector<std::uint32_t> decodable;  // ascending
  // For each decodable device, one subtraction set under which it decodes.
  std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> witness;
};

// Fixpoint of "subtract any subset of the already-decodable signals from
// m0, rescan, admit new devices". Equals the engine's unbounded-alpha
// decoded set. Guard: at most 12 distinct devices in m0.
ClosureResult closure_decode(const SignalMatrix& m0, const ChannelParams& channel);

// Exact expected fraction of decoded devices at unbounded alpha, by full
// enumeration of the (C(R,K) * L)^N equally likely access maps.
// Guard: enumeration space <= 10^7 maps.
Rational exact_access_probability(const SystemConfig& config);

}  // namespace gfa
