#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adamo/optimizer.hpp"

namespace adamo {

// Versioned binary container for resumable runs: experiment config text,
// parameter blocks, per-block optimizer state, and the shuffle-stream RNG
// state. Doubles are stored as raw little-endian IEEE-754 bytes, so a
// save/load round trip is bit-exact. Layout is documented in the README.
struct Checkpoint {
  static constexpr std::uint32_t kMagic = 0x4F4D4441;  // "ADMO"
  static constexpr std::uint32_t kVersion = 1;

  std::string config_text;
  OptKind optimizer = OptKind::kAdamO;
  std::vector<ParamBlock> blocks;
  std::vector<BlockState> states;
  std::array<std::uint64_t, 4> rng_state{};
  std::int64_t epochs_completed = 0;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

}  // namespace adamo
