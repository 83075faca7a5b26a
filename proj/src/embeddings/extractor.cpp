#include "maivar/embeddings/extractor.hpp"

#include <cmath>

#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"

namespace maivar::embed {

namespace {

constexpr std::uint64_t kAudioStream = 1;
constexpr std::uint64_t kVideoStream = 2;

std::vector<double> random_projection(std::uint64_t seed, std::size_t out_dim, std::size_t in_dim) {
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    std::vector<double> m(out_dim * in_dim);
    for (auto& v : m) v = rng.uniform(-bound, bound);
    return m;
}

std::vector<float> to_float(const std::vector<double>& v) {
    return std::vector<float>(v.begin(), v.end());
}

}  // namespace

ToyExtractor::ToyExtractor(const ToyExtractorSpec& spec) : spec_(spec) {
    if (spec.patch_rows == 0 || spec.patch_cols == 0 || image::kImageHeight % spec.patch_rows != 0 ||
        image::kImageWidth % spec.patch_cols != 0)
        throw InvalidParameter("patch grid must evenly divide the 224x224 image");
    if (spec.audio_dim != kAudioEmbeddingDim || spec.video_dim != kVideoFeatureDim)
        throw ShapeMismatch("toy extractor must emit 1536-dim audio and 1024-dim video features");
    audio_proj_ = random_projection(derive_seed(spec.seed, kAudioStream), spec.audio_dim, spec.patch_features());
    video_proj_ = random_projection(derive_seed(spec.seed, kVideoStream), spec.video_dim, spec.patch_features());
}

std::vector<double> ToyExtractor::patch_vector(const image::NormalizedTensor& t) const {
    if (t.values.size() != image::kImageBytes) throw DimensionMismatch("tensor is not 3x224x224");
    const std::size_t ph = image::kImageHeight / spec_.patch_rows;
    const std::size_t pw = image::kImageWidth / spec_.patch_cols;
    const double area = static_cast<double>(ph * pw);

    std::vector<double> out(spec_.patch_features());
    std::size_t idx = 0;
    for (std::size_t c = 0; c < image::kImageChannels; ++c) {
        for (std::size_t pr = 0; pr < spec_.patch_rows; ++pr) {
            for (std::size_t pc = 0; pc < spec_.patch_cols; ++pc) {
                double acc = 0.0;
                for (std::size_t y = pr * ph; y < (pr + 1) * ph; ++y)
                    for (std::size_t x = pc * pw; x < (pc + 1) * pw; ++x) acc += t.at(c, y, x);
                out[idx++] = acc / area;
            }
        }
    }
    return out;
}

std::vector<double> ToyExtractor::project_relu(std::span<const double> projection, std::span<const double> patch,
                                               std::size_t out_dim) {
    const std::size_t in_dim = patch.size();
    std::vector<double> out(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i) {
        double acc = 0.0;
        const double* row = projection.data() + i * in_dim;
        for (std::size_t j = 0; j < in_dim; ++j) acc += row[j] * patch[j];
        out[i] = acc > 0.0 ? acc : 0.0;
    }
    return out;
}

AudioEmbedding ToyExtractor::extract_audio(const image::NormalizedTensor& t, std::string clip_id) const {
    AudioEmbedding e;
    e.clip_id = std::move(clip_id);
    e.values = to_float(project_relu(audio_proj_, patch_vector(t), spec_.audio_dim));
    return e;
}

VideoEmbedding ToyExtractor::extract_video(std::span<const image::NormalizedTensor> frames,
                                           std::string clip_id) const {
    if (frames.empty()) throw EmptyInput("video clip '" + clip_id + "' has no frames");

    const std::size_t n = frames.size();
    const std::size_t features = spec_.patch_features();
    std::vector<std::vector<double>> sums(kVideoSegments);
    std::vector<std::size_t> counts(kVideoSegments, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t seg = i * kVideoSegments / n;
        const auto patch = patch_vector(frames[i]);
        if (sums[seg].empty()) sums[seg].assign(features, 0.0);
        for (std::size_t j = 0; j < features; ++j) sums[seg][j] += patch[j];
        ++counts[seg];
    }

    VideoEmbedding e;
    e.clip_id = std::move(clip_id);
    std::size_t last_filled = 0;
    for (std::size_t s = 0; s < kVideoSegments; ++s) {
        float* row = e.values.data() + s * kVideoFeatureDim;
        if (counts[s] == 0) {
            // Frame 0 always lands in segment 0, so a donor exists.
            std::copy_n(e.values.data() + last_filled * kVideoFeatureDim, kVideoFeatureDim, row);
            continue;
        }
        for (auto& v : sums[s]) v /= static_cast<double>(counts[s]);
        const auto projected = project_relu(video_proj_, sums[s], spec_.video_dim);
        std::copy(projected.begin(), projected.end(), row);
        last_filled = s;
    }
    return e;
}

AudioEmbedding toy_audio_extract(const image::NormalizedTensor& t, const ToyExtractorSpec& spec) {
    return ToyExtractor(spec).extract_audio(t);
}

VideoEmbedding toy_video_extract(std::span<const image::NormalizedTensor> frames, const ToyExtractorSpec& spec) {
    return ToyExtractor(spec).extract_video(frames);
}

}  // namespace maivar::embed
