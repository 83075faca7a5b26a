#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maivar/embeddings/embedding.hpp"
#include "maivar/fusion/fusion.hpp"
#include "maivar/neural/train.hpp"

namespace maivar::fusion {

enum class Split { Train, Test };

// One clip with both modalities resolved.
struct ClipSample {
    std::string clip_id;
    int label = 0;
    Split split = Split::Train;
    embed::AudioEmbedding audio;
    embed::VideoEmbedding video;
};

struct MaivarConfig {
    nn::TrainConfig audio{3e-4, 16, 60, 0.0, 0.9, 0.999, 1e-8, 11, true};
    nn::TrainConfig video{3e-4, 16, 60, 0.0, 0.9, 0.999, 1e-8, 23, true};
    nn::TrainConfig fusion{1e-4, 128, 120, 1e-6, 0.9, 0.999, 1e-8, 37, true};
    std::vector<std::size_t> hidden{512};
    VideoReduction reduction = VideoReduction::MeanSegments;
    bool transfer = true;
};

struct PhaseReport {
    std::vector<std::size_t> dims;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::vector<nn::EpochMetrics> metrics;
};

struct RunReport {
    std::size_t n_classes = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    PhaseReport audio;
    PhaseReport video;
    PhaseReport fusion;
    TransferReport transfer;
    // forward_fusion(0 (+) v) == forward_video(v) bit-for-bit on every test
    // clip, checked right after transfer_init.
    bool transfer_identity_exact = false;
    std::size_t transfer_identity_checked = 0;
};

struct RunResult {
    RunReport report;
    nn::MlpModel audio_model;
    nn::MlpModel video_model;
    nn::MlpModel fusion_model;
};

// Seeds derived from each phase's TrainConfig::seed.
std::uint64_t init_seed(const nn::TrainConfig& cfg) noexcept;

// Train audio MLP, train video MLP, transfer the video weights into the
// fusion MLP, fine-tune it on concatenated features, evaluate all three on
// the test split. Throws ValidationError if either split is empty or a
// label is out of range, ShapeMismatch on bad embeddings.
RunResult run_maivar(std::span<const ClipSample> samples, std::size_t n_classes, const MaivarConfig& cfg);

}  // namespace maivar::fusion
