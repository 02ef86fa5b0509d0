#pragma once

// Versioned binary checkpoints.
//
// Layout (all integers and reals little-endian, 8 bytes wide):
//   magic "F2DDPGCK" | u64 version | u64 n + n bytes config text
//   | i64 episode | i64 global step | i64 update count | u64 agent count
//   | per agent: actor, critic, target actor, target critic (network),
//                actor Adam, critic Adam (optimizer), f64 noise scale
//   | 4 x (u64 n + n bytes) random stream states: env, noise, sample, bias
// network   = u64 layer count | u64 widths (layers + 1)
//             | per layer: row-major weights, then biases (f64)
// optimizer = i64 step | f64 beta1, beta2, epsilon
//             | first moments, second moments (network entry order)
//
// The replay buffer is not stored; a resumed run starts with an empty one.

#include <cstdint>
#include <string>

#include "f2ddpg/config.hpp"
#include "f2ddpg/marl.hpp"

namespace f2ddpg::harness {

inline constexpr char kCheckpointMagic[8] = {'F', '2', 'D', 'D', 'P', 'G', 'C', 'K'};
inline constexpr std::uint64_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string config_text;  // SerializeConfig output, stored verbatim
  marl::TrainerState state;
};

std::string EncodeCheckpoint(const Checkpoint& checkpoint);
// Throws FormatError on a bad magic string, a version mismatch (message
// carries both versions), truncation or trailing bytes.
Checkpoint DecodeCheckpoint(const std::string& bytes);

// Writes to `path` via a temporary file and rename.
void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint);
// Throws FormatError when the file cannot be read.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace f2ddpg::harness
