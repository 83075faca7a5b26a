#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maivar/embeddings/embedding.hpp"
#include "maivar/image/tensor.hpp"

namespace maivar::embed {

struct ToyExtractorSpec {
    std::uint64_t seed = 0;
    std::size_t patch_rows = 8;
    std::size_t patch_cols = 8;
    std::size_t audio_dim = kAudioEmbeddingDim;
    std::size_t video_dim = kVideoFeatureDim;

    std::size_t patch_features() const noexcept { return image::kImageChannels * patch_rows * patch_cols; }
};

// Frozen stand-in for the pretrained backbones: per-channel patch means
// followed by a seeded random projection and ReLU.
class ToyExtractor {
public:
    explicit ToyExtractor(const ToyExtractorSpec& spec);

    const ToyExtractorSpec& spec() const noexcept { return spec_; }

    // Channel-major patch means: index = c * rows * cols + r * cols + col.
    std::vector<double> patch_vector(const image::NormalizedTensor& t) const;

    // relu(P_audio * patch_vector(t)).
    AudioEmbedding extract_audio(const image::NormalizedTensor& t, std::string clip_id = {}) const;

    // Frame i of F goes to segment floor(i * 25 / F); each segment averages
    // its frames' patch vectors in index order before projection. Segments
    // left empty (F < 25) repeat the nearest earlier filled segment.
    // Throws EmptyInput for zero frames.
    VideoEmbedding extract_video(std::span<const image::NormalizedTensor> frames, std::string clip_id = {}) const;

    // Projections are out x in, row-major.
    std::span<const double> audio_projection() const noexcept { return audio_proj_; }
    std::span<const double> video_projection() const noexcept { return video_proj_; }

    // relu(projection * patch) in fixed summation order.
    static std::vector<double> project_relu(std::span<const double> projection, std::span<const double> patch,
                                           std::size_t out_dim);

private:
    ToyExtractorSpec spec_;
    std::vector<double> audio_proj_;
    std::vector<double> video_proj_;
};

AudioEmbedding toy_audio_extract(const image::NormalizedTensor& t, const ToyExtractorSpec& spec);
VideoEmbedding toy_video_extract(std::span<const image::NormalizedTensor> frames, const ToyExtractorSpec& spec);

}  // namespace maivar::embed
