#include "maivar/pipeline/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "maivar/checks/oracles.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"
#include "maivar/dsp/features.hpp"
#include "maivar/embeddings/embedding_io.hpp"
#include "maivar/fusion/fusion.hpp"
#include "maivar/image/png_io.hpp"
#include "maivar/image/render.hpp"
#include "maivar/neural/adam.hpp"
#include "maivar/neural/model_io.hpp"
#include "maivar/neural/train.hpp"

namespace maivar::pipeline {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Outcome {
    bool passed;
    std::string detail;
};

dsp::AudioClip tone(double hz, std::size_t n) {
    dsp::AudioClip c;
    c.id = "tone";
    c.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.samples[i] = 0.8 * std::sin(2.0 * std::numbers::pi * hz * i / c.sample_rate_hz);
    return c;
}

Outcome check_stft(bool fault) {
    Rng rng(101);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        dsp::AudioClip clip;
        clip.samples.resize(1024 + rng.below(3073));
        for (auto& s : clip.samples) s = rng.uniform(-1.0, 1.0);
        const auto ref = checks::reference_stft_power(clip.samples, 2048, 512);
        if (fault) clip.samples[clip.samples.size() / 2] += 0.25;
        const auto spec = dsp::stft_power(clip);
        for (std::size_t t = 0; t < spec.frames; ++t)
            worst = std::max(worst, checks::max_relative_deviation(spec.frame(t), ref[t]));
    }
    return {worst < 1e-9, "max relative deviation " + sci(worst)};
}

Outcome check_tone(bool fault) {
    const auto clip = tone(fault ? 466.16 : 440.0, dsp::kTargetSampleRate);
    const auto inner = dsp::interior_frames(clip.samples.size());
    const auto chroma = dsp::compute_feature(clip, dsp::FeatureKind::Chromagram);
    const auto centroid = dsp::compute_feature(clip, dsp::FeatureKind::SpectralCentroid);
    const auto rolloff = dsp::compute_feature(clip, dsp::FeatureKind::SpectralRolloff);
    const double bin_hz = static_cast<double>(dsp::kTargetSampleRate) / 2048.0;
    for (std::size_t t = inner.first; t < inner.last; ++t) {
        std::size_t arg = 0;
        for (std::size_t d = 1; d < 12; ++d)
            if (chroma.at(t, d) > chroma.at(t, arg)) arg = d;
        if (arg != 9) return {false, "frame " + std::to_string(t) + ": chroma argmax " + std::to_string(arg)};
        if (std::abs(centroid.at(t, 0) - 440.0) > bin_hz)
            return {false, "frame " + std::to_string(t) + ": centroid " + std::to_string(centroid.at(t, 0))};
        if (std::abs(rolloff.at(t, 0) - 41 * bin_hz) > 1e-9)
            return {false, "frame " + std::to_string(t) + ": rolloff " + std::to_string(rolloff.at(t, 0))};
    }
    return {true, std::to_string(inner.last - inner.first) + " interior frames"};
}

Outcome check_silence(bool fault) {
    dsp::AudioClip clip;
    clip.samples.assign(8192, 0.0);
    if (fault) clip.samples[4000] = 0.01;
    const double c0 = std::sqrt(40.0) * std::log(dsp::kLogFloor);
    const auto mfcc = dsp::compute_feature(clip, dsp::FeatureKind::Mfcc);
    for (std::size_t t = 0; t < mfcc.frames; ++t) {
        if (std::abs(mfcc.at(t, 0) - c0) > 1e-9) return {false, "mfcc c0 " + std::to_string(mfcc.at(t, 0))};
        for (std::size_t d = 1; d < mfcc.dims; ++d)
            if (std::abs(mfcc.at(t, d)) > 1e-9) return {false, "mfcc c" + std::to_string(d) + " nonzero"};
    }
    for (auto kind : {dsp::FeatureKind::SpectralCentroid, dsp::FeatureKind::SpectralRolloff, dsp::FeatureKind::Chromagram,
                      dsp::FeatureKind::MfccScaled, dsp::FeatureKind::Waveplot}) {
        const auto track = dsp::compute_feature(clip, kind);
        for (double v : track.values)
            if (v != 0.0) return {false, std::string(dsp::to_string(kind)) + " not zero"};
    }
    return {true, "floor and zero conventions hold"};
}

Outcome check_gradients(bool fault) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
        const std::vector<std::size_t> dims{5, 7, 4};
        const auto m = nn::init_model(dims, 40 + s);
        Rng rng(80 + s);
        nn::LabeledBatch b{nn::Matrix(6, 5), {}};
        for (auto& v : b.inputs.data) v = rng.uniform(-1.0, 1.0);
        for (int i = 0; i < 6; ++i) b.labels.push_back(static_cast<int>(rng.below(4)));
        auto analytic = nn::loss_and_gradients(m, b, 1e-3).grads;
        if (fault) analytic.weights[0][3] += 0.05;
        const auto cmp = checks::compare_gradients(analytic, checks::finite_difference_gradients(m, b, 1e-3));
        worst = std::max(worst, cmp.max_rel_error);
        if (cmp.failures) return {false, std::to_string(cmp.failures) + " gradient entries disagree"};
    }
    return {true, "max relative error " + sci(worst)};
}

Outcome check_adam(bool fault) {
    auto m = nn::make_model(std::vector<std::size_t>{1, 1});
    auto st = nn::make_adam_state(m);
    const double lr = 0.1, g1 = 1.0, g2 = 0.5;
    nn::adam_step(m, {{{g1}}, {{0.0}}}, st, lr);
    nn::adam_step(m, {{{g2}}, {{0.0}}}, st, lr);
    const double b1 = 0.9, b2 = 0.999, eps = fault ? 1e-3 : 1e-8;
    double mm = (1 - b1) * g1, vv = (1 - b2) * g1 * g1;
    double w = -lr * (mm / (1 - b1)) / (std::sqrt(vv / (1 - b2)) + eps);
    mm = b1 * mm + (1 - b1) * g2;
    vv = b2 * vv + (1 - b2) * g2 * g2;
    w -= lr * (mm / (1 - b1 * b1)) / (std::sqrt(vv / (1 - b2 * b2)) + eps);
    const double err = std::abs(m.layers[0].weights[0] - w);
    return {err < 1e-12, "two-step error " + sci(err)};
}

Outcome check_transfer(bool fault) {
    const std::vector<std::size_t> vdims{1024, 64, 6}, fdims{2560, 64, 6};
    auto video = nn::init_model(vdims, 5);
    Rng rng(6);
    for (auto& b : video.layers[0].biases) b = rng.uniform(-0.1, 0.1);
    const auto fused = fusion::transfer_init(video, fdims, 7).model;
    nn::Matrix v(20, 1024), x(20, 2560, 0.0);
    for (std::size_t r = 0; r < 20; ++r)
        for (std::size_t j = 0; j < 1024; ++j) x.at(r, 1536 + j) = v.at(r, j) = rng.uniform(0.0, 3.0);
    if (fault) x.at(0, 0) = 1.0;
    const bool same = nn::forward(video, v).data == nn::forward(fused, x).data;
    return {same, same ? "20 inputs bit-identical" : "fusion logits differ from video logits"};
}

Outcome check_determinism(bool fault) {
    Rng rng(9);
    nn::Dataset d{nn::Matrix(40, 6), {}};
    for (auto& v : d.inputs.data) v = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) d.labels.push_back(i % 3);
    const std::vector<std::size_t> dims{6, 10, 3};
    nn::TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 8;
    cfg.seed = 3;
    const auto a = nn::encode_model(nn::train(nn::init_model(dims, 1), d, cfg).model);
    if (fault) cfg.seed = 4;
    const auto b = nn::encode_model(nn::train(nn::init_model(dims, 1), d, cfg).model);
    return {a == b, a == b ? "repeat run byte-identical" : "repeat run differs"};
}

Outcome check_shapes(bool fault) {
    embed::EmbeddingFile audio;
    audio.cols = fault ? 1536 : 1535;
    audio.records.push_back({"a", std::vector<float>(audio.cols, 0.0f)});
    try {
        embed::to_audio_embeddings(embed::decode_embeddings(embed::encode_embeddings(audio)));
        return {false, "1535-dim audio embedding accepted"};
    } catch (const ShapeMismatch&) {
    }
    embed::EmbeddingFile video;
    video.modality = embed::Modality::Video;
    video.rows = 24;
    video.cols = 1024;
    video.records.push_back({"v", std::vector<float>(24 * 1024, 0.0f)});
    try {
        embed::to_video_embeddings(video);
        return {false, "24 x 1024 video embedding accepted"};
    } catch (const ShapeMismatch&) {
    }
    dsp::FeatureTrack t{dsp::FeatureKind::Mfcc, 3, 2, {0, 1, 2, 3, 4, 5}};
    const auto img = image::render(t);
    if (img.pixels.size() != image::kImageBytes) return {false, "rendered image is not 224 x 224 x 3"};
    return {true, "typed errors raised"};
}

}  // namespace

std::vector<std::string> selftest_check_names() {
    return {"stft_oracle", "tone_features", "silence", "gradients", "adam", "transfer_identity", "determinism", "shapes"};
}

std::vector<CheckOutcome> run_selftest(const std::optional<std::string>& inject_fault) {
    const std::vector<std::function<Outcome(bool)>> fns{check_stft,  check_tone,     check_silence,     check_gradients,
                                                        check_adam,  check_transfer, check_determinism, check_shapes};
    const auto names = selftest_check_names();
    if (inject_fault && std::find(names.begin(), names.end(), *inject_fault) == names.end())
        throw ValidationError("unknown selftest check '" + *inject_fault + "'");

    std::vector<CheckOutcome> out;
    for (std::size_t i = 0; i < fns.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        CheckOutcome c;
        c.name = names[i];
        try {
            const auto r = fns[i](inject_fault && *inject_fault == names[i]);
            c.passed = r.passed;
            c.detail = r.detail;
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = std::string("threw: ") + e.what();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace maivar::pipeline
