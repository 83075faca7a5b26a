#include "maivar/fusion/run.hpp"

#include <cstring>

#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"

namespace maivar::fusion {

namespace {

constexpr std::uint64_t kInitStream = 0x494e4954ULL;

struct Views {
    nn::Dataset audio, video, fused;
};

Views build_views(const std::vector<const ClipSample*>& clips, VideoReduction mode) {
    const std::size_t n = clips.size();
    const std::size_t vdim = reduced_video_dim(mode);
    Views v;
    v.audio.inputs = nn::Matrix(n, embed::kAudioEmbeddingDim);
    v.video.inputs = nn::Matrix(n, vdim);
    v.fused.inputs = nn::Matrix(n, embed::kAudioEmbeddingDim + vdim);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& c = *clips[r];
        const auto fused = fuse(c.audio, reduce_video(c.video, mode), mode, c.label);
        std::copy_n(fused.values.begin(), embed::kAudioEmbeddingDim, v.audio.inputs.row(r).begin());
        std::copy(fused.values.begin() + embed::kAudioEmbeddingDim, fused.values.end(), v.video.inputs.row(r).begin());
        std::copy(fused.values.begin(), fused.values.end(), v.fused.inputs.row(r).begin());
        v.audio.labels.push_back(c.label);
        v.video.labels.push_back(c.label);
        v.fused.labels.push_back(c.label);
    }
    return v;
}

std::vector<std::size_t> dims_for(std::size_t d_in, const std::vector<std::size_t>& hidden, std::size_t n_classes) {
    std::vector<std::size_t> dims{d_in};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(n_classes);
    return dims;
}

PhaseReport train_phase(nn::MlpModel init, const nn::Dataset& train, const nn::Dataset& test,
                        const nn::TrainConfig& cfg, nn::MlpModel& out) {
    PhaseReport phase;
    phase.dims = init.layer_dims;
    auto trained = nn::train(std::move(init), train, cfg, &test);
    phase.metrics = std::move(trained.metrics);
    phase.train_accuracy = nn::evaluate(trained.model, train);
    phase.test_accuracy = nn::evaluate(trained.model, test);
    out = std::move(trained.model);
    return phase;
}

bool bit_equal(const nn::Matrix& a, const nn::Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols &&
           std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0;
}

}  // namespace

std::uint64_t init_seed(const nn::TrainConfig& cfg) noexcept { return derive_seed(cfg.seed, kInitStream); }

RunResult run_maivar(std::span<const ClipSample> samples, std::size_t n_classes, const MaivarConfig& cfg) {
    if (n_classes < 2) throw ValidationError("need at least two classes");
    std::vector<const ClipSample*> train_clips, test_clips;
    for (const auto& s : samples) {
        if (s.label < 0 || static_cast<std::size_t>(s.label) >= n_classes)
            throw ValidationError("clip '" + s.clip_id + "' has label outside [0, n_classes)");
        (s.split == Split::Train ? train_clips : test_clips).push_back(&s);
    }
    if (train_clips.empty() || test_clips.empty()) throw ValidationError("both train and test splits must be non-empty");

    const auto train = build_views(train_clips, cfg.reduction);
    const auto test = build_views(test_clips, cfg.reduction);

    RunResult result;
    auto& report = result.report;
    report.n_classes = n_classes;
    report.n_train = train_clips.size();
    report.n_test = test_clips.size();

    const std::size_t vdim = reduced_video_dim(cfg.reduction);
    const auto audio_dims = dims_for(embed::kAudioEmbeddingDim, cfg.hidden, n_classes);
    const auto video_dims = dims_for(vdim, cfg.hidden, n_classes);
    const auto fusion_dims = dims_for(embed::kAudioEmbeddingDim + vdim, cfg.hidden, n_classes);

    report.audio = train_phase(nn::init_model(audio_dims, init_seed(cfg.audio)), train.audio, test.audio, cfg.audio,
                               result.audio_model);
    report.video = train_phase(nn::init_model(video_dims, init_seed(cfg.video)), train.video, test.video, cfg.video,
                               result.video_model);

    auto transferred = transfer_init(result.video_model, fusion_dims, init_seed(cfg.fusion), cfg.transfer);
    report.transfer = transferred.report;

    nn::Matrix zero_audio(test.fused.inputs.rows, test.fused.inputs.cols, 0.0);
    for (std::size_t r = 0; r < zero_audio.rows; ++r) {
        const auto v = test.video.inputs.row(r);
        std::copy(v.begin(), v.end(), zero_audio.row(r).begin() + embed::kAudioEmbeddingDim);
    }
    report.transfer_identity_checked = zero_audio.rows;
    report.transfer_identity_exact =
        bit_equal(nn::forward(transferred.model, zero_audio), nn::forward(result.video_model, test.video.inputs));

    report.fusion = train_phase(std::move(transferred.model), train.fused, test.fused, cfg.fusion, result.fusion_model);
    return result;
}

}  // namespace maivar::fusion
