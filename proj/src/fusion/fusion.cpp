#include "maivar/fusion/fusion.hpp"

#include <algorithm>

#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"

namespace maivar::fusion {

std::string_view to_string(VideoReduction mode) noexcept {
    return mode == VideoReduction::MeanSegments ? "mean_segments" : "flatten";
}

std::optional<VideoReduction> parse_video_reduction(std::string_view name) noexcept {
    if (name == "mean_segments") return VideoReduction::MeanSegments;
    if (name == "flatten") return VideoReduction::Flatten;
    return std::nullopt;
}

std::size_t reduced_video_dim(VideoReduction mode) noexcept {
    return mode == VideoReduction::MeanSegments ? embed::kVideoFeatureDim : embed::kVideoEmbeddingSize;
}

std::vector<double> reduce_video(const embed::VideoEmbedding& emb, VideoReduction mode) {
    embed::validate(emb);
    if (mode == VideoReduction::Flatten) return std::vector<double>(emb.values.begin(), emb.values.end());

    std::vector<double> mean(embed::kVideoFeatureDim, 0.0);
    for (std::size_t s = 0; s < embed::kVideoSegments; ++s)
        for (std::size_t j = 0; j < embed::kVideoFeatureDim; ++j) mean[j] += emb.at(s, j);
    for (auto& v : mean) v /= static_cast<double>(embed::kVideoSegments);
    return mean;
}

FusionInput fuse(const embed::AudioEmbedding& audio, std::span<const double> video_reduced, VideoReduction mode,
                 int label) {
    embed::validate(audio);
    if (video_reduced.size() != reduced_video_dim(mode)) {
        throw ShapeMismatch("video slice has " + std::to_string(video_reduced.size()) + " values, expected " +
                            std::to_string(reduced_video_dim(mode)));
    }
    FusionInput out;
    out.clip_id = audio.clip_id;
    out.label = label;
    out.values.reserve(audio.values.size() + video_reduced.size());
    out.values.insert(out.values.end(), audio.values.begin(), audio.values.end());
    out.values.insert(out.values.end(), video_reduced.begin(), video_reduced.end());
    return out;
}

std::string_view to_string(TransferAction action) noexcept {
    switch (action) {
        case TransferAction::CopiedFull: return "copied_full";
        case TransferAction::CopiedSlice: return "copied_slice";
        case TransferAction::FreshInit: return "fresh_init";
    }
    return "unknown";
}

TransferResult transfer_init(const nn::MlpModel& video_model, std::span<const std::size_t> fusion_dims,
                             std::uint64_t seed, bool copy_weights) {
    nn::validate(video_model);
    const auto& vdims = video_model.layer_dims;
    if (fusion_dims.size() != vdims.size())
        throw IncompatibleArchitecture("fusion and video models differ in depth");
    if (!std::equal(fusion_dims.begin() + 1, fusion_dims.end(), vdims.begin() + 1))
        throw IncompatibleArchitecture("fusion and video models differ in hidden widths or class count");
    if (fusion_dims.front() < vdims.front())
        throw IncompatibleArchitecture("fusion input is narrower than the video input");

    TransferResult result{nn::init_model(fusion_dims, seed), {}};
    for (std::size_t l = 0; l < result.model.layers.size(); ++l) {
        auto& dst = result.model.layers[l];
        const auto& src = video_model.layers[l];
        LayerTransfer t;
        t.layer = l;
        const std::size_t total = dst.weights.size() + dst.biases.size();
        if (!copy_weights) {
            t.action = TransferAction::FreshInit;
            t.fresh_params = total;
        } else if (dst.in == src.in) {
            dst.weights = src.weights;
            dst.biases = src.biases;
            t.action = TransferAction::CopiedFull;
            t.copied_params = total;
        } else {
            const std::size_t offset = dst.in - src.in;
            for (std::size_t o = 0; o < dst.out; ++o)
                std::copy_n(src.weights.begin() + static_cast<std::ptrdiff_t>(o * src.in), src.in,
                            dst.weights.begin() + static_cast<std::ptrdiff_t>(o * dst.in + offset));
            dst.biases = src.biases;
            t.action = TransferAction::CopiedSlice;
            t.copied_params = src.weights.size() + src.biases.size();
            t.fresh_params = dst.out * offset;
        }
        result.report.copied_params += t.copied_params;
        result.report.fresh_params += t.fresh_params;
        result.report.layers.push_back(t);
    }
    return result;
}

}  // namespace maivar::fusion
