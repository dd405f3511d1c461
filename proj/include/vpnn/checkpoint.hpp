#pragma once

// Checkpoint file layout (all integers little-endian):
//   "VPNNCKPT"                 8-byte magic
//   u32 version                currently 1
//   u32 metadata length, then UTF-8 JSON metadata (architecture, transform,
//                              normalization policy, training metadata)
//   u32 plane count, then per plane: u64 rows, u64 cols, rows·cols f64
//                              values in column-major order
//   u32 CRC-32 of every preceding byte

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vpnn/model.hpp"

namespace vpnn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ModelCheckpoint {
  Model model;
  std::string normalization = "mixture-max";
  int epochs = 0;
  std::optional<double> final_loss;
  std::vector<double> loss_history;
  std::uint64_t seed = 0;
};

std::string checkpoint_serialize(const ModelCheckpoint& ckpt);
/// Throws Parse (not a checkpoint, truncated, malformed metadata), Checksum,
/// Version, or Config when `expected` names a different model.
ModelCheckpoint checkpoint_deserialize(
    const std::string& bytes, std::optional<ModelKind> expected = std::nullopt);

void checkpoint_save(const std::filesystem::path& path,
                     const ModelCheckpoint& ckpt);
ModelCheckpoint checkpoint_load(const std::filesystem::path& path,
                                std::optional<ModelKind> expected = std::nullopt);

}  // namespace vpnn
