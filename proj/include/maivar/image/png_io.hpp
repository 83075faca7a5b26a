#pragma once

#include <string>
#include <string_view>

#include "maivar/image/audio_image.hpp"

namespace maivar::image {

// 8-bit RGB PNG, no alpha.
std::string encode_png(const AudioImage& img);
void write_png(const AudioImage& img, const std::string& path);

// Throws MalformedImage for undecodable data and DimensionMismatch for any
// size other than 224 x 224. Gray/alpha/palette inputs are converted to RGB.
AudioImage decode_png(std::string_view bytes, std::string clip_id = {});
AudioImage read_png(const std::string& path, std::string clip_id = {});

}  // namespace maivar::image
