#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "maivar/neural/mlp.hpp"

namespace maivar::nn {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// "MLPM" | u32 version | u32 n_dims | u64 dims[n_dims] |
// per layer: f64 weights[out * in] then f64 biases[out]; little-endian.
std::string encode_model(const MlpModel& model);

// Throws MalformedModel (bad magic, truncation, trailing bytes),
// VersionMismatch, or ShapeError if `expected_dims` is given and differs.
MlpModel decode_model(std::string_view bytes, std::optional<std::span<const std::size_t>> expected_dims = {});

void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path, std::optional<std::span<const std::size_t>> expected_dims = {});

}  // namespace maivar::nn
