#pragma once

// Embedding files.
//
// Text:   first line "N k", then N lines of k floats printed with 17
//         significant digits (round-trips 64-bit values).
// Binary: "GSNE" magic, uint32 version, uint64 N, uint64 k, then N*k
//         row-major float64 values; all little-endian.

#include <cstdint>
#include <filesystem>

#include "gsn/matrix.hpp"

namespace gsn {

inline constexpr char kEmbeddingMagic[4] = {'G', 'S', 'N', 'E'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;

void write_embeddings_text(const std::filesystem::path& path, const Matrix& x);
void write_embeddings_binary(const std::filesystem::path& path, const Matrix& x);
/// Detects the format from the leading magic bytes.
Matrix read_embeddings(const std::filesystem::path& path);

}  // namespace gsn
