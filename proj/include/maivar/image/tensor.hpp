#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "maivar/image/audio_image.hpp"

namespace maivar::image {

inline constexpr std::array<double, 3> kImageNetMean = {0.485, 0.456, 0.406};
inline constexpr std::array<double, 3> kImageNetStd = {0.229, 0.224, 0.225};

// 3 x 224 x 224 (CHW). value(c, y, x) = (pixel / 255 - mean[c]) / std[c].
struct NormalizedTensor {
    std::vector<double> values = std::vector<double>(kImageBytes, 0.0);
    std::array<double, 3> mean = kImageNetMean;
    std::array<double, 3> std = kImageNetStd;

    double at(std::size_t c, std::size_t y, std::size_t x) const noexcept {
        return values[(c * kImageHeight + y) * kImageWidth + x];
    }
    double& at(std::size_t c, std::size_t y, std::size_t x) noexcept {
        return values[(c * kImageHeight + y) * kImageWidth + x];
    }
};

NormalizedTensor normalize(const AudioImage& img);

// Inverse of normalize, rounding to the nearest byte.
AudioImage denormalize(const NormalizedTensor& t);

struct AugmentPolicy {
    double horizontal_flip_prob = 0.0;
    double vertical_flip_prob = 0.0;
    std::uint64_t seed = 0;
};

struct FlipDecision {
    bool horizontal = false;
    bool vertical = false;
};

// Pure function of (seed, draw_index): same key, same decision.
FlipDecision flip_decision(const AugmentPolicy& p, std::uint64_t draw_index);

NormalizedTensor flip(const NormalizedTensor& t, FlipDecision d);

// Random horizontal / vertical flips; throws InvalidParameter on
// probabilities outside [0, 1].
NormalizedTensor augment(const NormalizedTensor& t, const AugmentPolicy& p, std::uint64_t draw_index);

}  // namespace maivar::image
