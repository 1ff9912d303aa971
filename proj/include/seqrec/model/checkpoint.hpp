#pragma once
// Checkpoint layout (little endian, trailing FNV-1a u64 over everything before it):
//   "SSRCKPT\0", u32 version, u32 real_bytes (= 4),
//   config: u32 dim, max_len, num_layers, num_heads, negatives;
//           f64 dropout, lambda, beta, learning_rate; u64 seed; u8 reg kind;
//           u8 item_reg_in_batch; u32 num_items,
//   u32 tensor count, then per tensor: u16 name length, name, u32 rows,
//   u32 cols, rows*cols f32 values.
// Values are stored as 32-bit floats, so float parameters round-trip
// bit-exactly.

#include <cstdint>
#include <filesystem>

#include "seqrec/model/config.hpp"
#include "seqrec/model/params.hpp"

namespace seqrec::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

template <typename Real>
struct Checkpoint {
  ModelConfig config;
  ModelParams<Real> params;
};

/// Throws IoError.
template <typename Real>
void save_checkpoint(const ModelParams<Real>& params, const ModelConfig& cfg, const std::filesystem::path& path);

/// Throws IoError, IncompatibleCheckpoint on a version or real-size
/// mismatch, FormatError on a bad magic, truncation, corruption, or tensor
/// shapes that disagree with the stored config.
template <typename Real>
Checkpoint<Real> load_checkpoint(const std::filesystem::path& path);

}  // namespace seqrec::model
