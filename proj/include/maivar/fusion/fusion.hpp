#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maivar/embeddings/embedding.hpp"
#include "maivar/neural/mlp.hpp"

namespace maivar::fusion {

enum class VideoReduction { MeanSegments, Flatten };

std::string_view to_string(VideoReduction mode) noexcept;
std::optional<VideoReduction> parse_video_reduction(std::string_view name) noexcept;

// 1024 for MeanSegments, 25600 for Flatten.
std::size_t reduced_video_dim(VideoReduction mode) noexcept;

// MeanSegments averages the 25 rows (summed in segment order); Flatten is
// the row-major 25 x 1024 concatenation.
std::vector<double> reduce_video(const embed::VideoEmbedding& emb, VideoReduction mode = VideoReduction::MeanSegments);

// Concatenated features: audio slice [0, 1536), video slice after it.
struct FusionInput {
    std::string clip_id;
    std::vector<double> values;
    int label = -1;
};

// Throws ShapeMismatch unless audio is 1536 values and the video slice has
// reduced_video_dim(mode) values.
FusionInput fuse(const embed::AudioEmbedding& audio, std::span<const double> video_reduced,
                 VideoReduction mode = VideoReduction::MeanSegments, int label = -1);

enum class TransferAction { CopiedFull, CopiedSlice, FreshInit };
std::string_view to_string(TransferAction action) noexcept;

struct LayerTransfer {
    std::size_t layer = 0;
    TransferAction action = TransferAction::FreshInit;
    std::size_t copied_params = 0;
    std::size_t fresh_params = 0;
};

struct TransferReport {
    std::vector<LayerTransfer> layers;
    std::size_t copied_params = 0;
    std::size_t fresh_params = 0;
};

struct TransferResult {
    nn::MlpModel model;
    TransferReport report;
};

// Builds the fusion classifier from a trained video classifier.
//
// Layers whose shape matches are copied whole. The first layer, whose
// input widens from the video dim to audio + video, receives the video
// model's weights in its trailing (video-slice) columns and its biases;
// the leading audio-slice columns keep a fresh fan-scaled init drawn
// from `seed`. With `copy_weights` false every layer is fresh (ablation).
//
// Throws IncompatibleArchitecture unless depth, hidden widths and class
// count agree and the fusion input is at least as wide as the video input.
TransferResult transfer_init(const nn::MlpModel& video_model, std::span<const std::size_t> fusion_dims,
                             std::uint64_t seed, bool copy_weights = true);

}  // namespace maivar::fusion
