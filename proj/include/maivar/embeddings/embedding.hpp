#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace maivar::embed {

inline constexpr std::size_t kAudioEmbeddingDim = 1536;
inline constexpr std::size_t kVideoSegments = 25;
inline constexpr std::size_t kVideoFeatureDim = 1024;
inline constexpr std::size_t kVideoEmbeddingSize = kVideoSegments * kVideoFeatureDim;

// Pooled audio-image backbone features for one clip.
struct AudioEmbedding {
    std::string clip_id;
    std::vector<float> values = std::vector<float>(kAudioEmbeddingDim, 0.0f);
};

// Per-segment video backbone features, segments x features row-major.
struct VideoEmbedding {
    std::string clip_id;
    std::vector<float> values = std::vector<float>(kVideoEmbeddingSize, 0.0f);

    float at(std::size_t segment, std::size_t feature) const noexcept {
        return values[segment * kVideoFeatureDim + feature];
    }
};

// Shape and finiteness checks; throw ShapeMismatch / InvalidParameter.
void validate(const AudioEmbedding& e);
void validate(const VideoEmbedding& e);

}  // namespace maivar::embed
