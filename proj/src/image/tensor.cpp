#include "maivar/image/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"

namespace maivar::image {

NormalizedTensor normalize(const AudioImage& img) {
    validate(img);
    NormalizedTensor t;
    for (std::size_t y = 0; y < kImageHeight; ++y) {
        for (std::size_t x = 0; x < kImageWidth; ++x) {
            for (std::size_t c = 0; c < kImageChannels; ++c) {
                const double v = img.pixels[(y * kImageWidth + x) * kImageChannels + c] / 255.0;
                t.at(c, y, x) = (v - t.mean[c]) / t.std[c];
            }
        }
    }
    return t;
}

AudioImage denormalize(const NormalizedTensor& t) {
    if (t.values.size() != kImageBytes) throw DimensionMismatch("tensor is not 3x224x224");
    AudioImage img;
    for (std::size_t y = 0; y < kImageHeight; ++y) {
        for (std::size_t x = 0; x < kImageWidth; ++x) {
            for (std::size_t c = 0; c < kImageChannels; ++c) {
                const double v = (t.at(c, y, x) * t.std[c] + t.mean[c]) * 255.0;
                img.pixels[(y * kImageWidth + x) * kImageChannels + c] =
                    static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
            }
        }
    }
    return img;
}

FlipDecision flip_decision(const AugmentPolicy& p, std::uint64_t draw_index) {
    const std::uint64_t key = derive_seed(p.seed, draw_index);
    return {counter_uniform(key, 0) < p.horizontal_flip_prob, counter_uniform(key, 1) < p.vertical_flip_prob};
}

NormalizedTensor flip(const NormalizedTensor& t, FlipDecision d) {
    NormalizedTensor out = t;
    if (!d.horizontal && !d.vertical) return out;
    for (std::size_t c = 0; c < kImageChannels; ++c) {
        for (std::size_t y = 0; y < kImageHeight; ++y) {
            const std::size_t sy = d.vertical ? kImageHeight - 1 - y : y;
            for (std::size_t x = 0; x < kImageWidth; ++x) {
                const std::size_t sx = d.horizontal ? kImageWidth - 1 - x : x;
                out.at(c, y, x) = t.at(c, sy, sx);
            }
        }
    }
    return out;
}

NormalizedTensor augment(const NormalizedTensor& t, const AugmentPolicy& p, std::uint64_t draw_index) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(p.horizontal_flip_prob) || !in_unit(p.vertical_flip_prob))
        throw InvalidParameter("flip probabilities must lie in [0, 1]");
    return flip(t, flip_decision(p, draw_index));
}

}  // namespace maivar::image
