#pragma once

#include <string>

#include "drec/encoder.hpp"

namespace drec {

// Embedding checkpoint: header of little-endian u64 fields
// (magic, version, M, N, d) followed by row-major f64 rows of the user
// table then the item table.
inline constexpr std::uint64_t kCheckpointMagic = 0x31424d4543455244ULL;  // "DRECEMB1"
inline constexpr std::uint64_t kCheckpointVersion = 1;

void write_checkpoint(const std::string& path, const EmbeddingState& state);
EmbeddingState read_checkpoint(const std::string& path);

}  // namespace drec
