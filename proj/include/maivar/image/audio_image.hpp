#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "maivar/dsp/features.hpp"

namespace maivar::image {

inline constexpr std::size_t kImageWidth = 224;
inline constexpr std::size_t kImageHeight = 224;
inline constexpr std::size_t kImageChannels = 3;
inline constexpr std::size_t kImageBytes = kImageWidth * kImageHeight * kImageChannels;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Rec. 709 relative luminance of an sRGB byte triple (no gamma).
constexpr double luminance(Rgb c) noexcept { return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b; }

struct Colormap {
    std::string name;
    std::array<Rgb, 256> lut{};
};

// Viridis quantized to bytes, nudged so luminance is strictly increasing.
const Colormap& viridis();

// 224 x 224 RGB, row-major, row 0 at the top.
struct AudioImage {
    std::string clip_id;
    dsp::FeatureKind kind = dsp::FeatureKind::Chromagram;
    std::vector<std::uint8_t> pixels = std::vector<std::uint8_t>(kImageBytes, 0);

    Rgb at(std::size_t y, std::size_t x) const noexcept {
        const auto* p = pixels.data() + (y * kImageWidth + x) * kImageChannels;
        return {p[0], p[1], p[2]};
    }
    void set(std::size_t y, std::size_t x, Rgb c) noexcept {
        auto* p = pixels.data() + (y * kImageWidth + x) * kImageChannels;
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }
};

// Throws DimensionMismatch unless the buffer is exactly 224 x 224 x 3.
void validate(const AudioImage& img);

// `<clip_id>.<kind>.png`
std::string image_file_name(std::string_view clip_id, dsp::FeatureKind kind);

}  // namespace maivar::image
