#pragma once

// Versioned JSON parameter files. Every float is stored as a C99 hex-float
// string ("0x1.8p+1"), which round-trips 64-bit values bit-exactly; a
// decimal rendering sits next to it for human readers and is ignored on load.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "gsn/force_model.hpp"

namespace gsn {

inline constexpr int kParamFormatVersion = 1;

struct ParamFile {
  ForceParams params;
  FeatureOptions features;
  /// Embedding dimension used during training; 0 when unknown.
  std::size_t trained_k = 0;
};

std::string hex_double(double value);
/// Accepts hex-float and decimal spellings; throws on trailing garbage.
double parse_double(std::string_view text);

std::string params_to_json(const ParamFile& file);
ParamFile params_from_json(std::string_view text);

void save_params(const std::filesystem::path& path, const ParamFile& file);
ParamFile load_params(const std::filesystem::path& path);

}  // namespace gsn
