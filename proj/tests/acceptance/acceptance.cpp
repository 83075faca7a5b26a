// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Argument: scratch directory for the desk-scale runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "maivar/checks/oracles.hpp"
#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"
#include "maivar/dsp/features.hpp"
#include "maivar/embeddings/embedding_io.hpp"
#include "maivar/fusion/fusion.hpp"
#include "maivar/image/png_io.hpp"
#include "maivar/neural/adam.hpp"
#include "maivar/pipeline/commands.hpp"
#include "maivar/pipeline/report.hpp"
#include "maivar/pipeline/synth.hpp"

namespace fs = std::filesystem;
using namespace maivar;
using namespace maivar::pipeline;

namespace {

struct Verdict {
    bool passed;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

fs::path g_work;

// Shared desk-scale dataset and the chromagram run, built on first use.
struct DeskData {
    DatasetManifest manifest;
    RunConfig config;
    double synth_seconds = 0.0;
};

const DeskData& desk() {
    static const DeskData d = [] {
        const auto start = Clock::now();
        SynthOptions o;
        o.out_dir = g_work / "synth";
        o.classes = 4;
        o.clips_per_class = 50;
        o.seed = 0;
        fs::remove_all(o.out_dir);
        const auto r = cmd_synth(o);
        DeskData out;
        out.manifest = read_manifest(r.manifest);
        out.config = load_run_config(r.config);
        out.synth_seconds = seconds_since(start);
        return out;
    }();
    return d;
}

fs::path run_dir(dsp::FeatureKind kind, const std::string& suffix = {}) {
    return g_work / ("run_" + std::string(dsp::to_string(kind)) + suffix);
}

// extract + train for one representation; returns wall seconds.
double full_run(dsp::FeatureKind kind, const fs::path& out) {
    const auto& d = desk();
    const auto start = Clock::now();
    fs::remove_all(out);
    auto cfg = d.config;
    cfg.kind = kind;
    cmd_extract(d.manifest, {kind, cfg.extractor_seed, {}, out, cfg.jobs});
    cmd_train(d.manifest, {cfg, out, out});
    return seconds_since(start);
}

Verdict ac1_stft_oracle() {
    const auto start = Clock::now();
    Rng rng(2024);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        dsp::AudioClip clip;
        clip.samples.resize(512 + rng.below(4096 - 512 + 1));
        for (auto& s : clip.samples) s = rng.uniform(-1.0, 1.0);
        const auto spec = dsp::stft_power(clip);
        const auto ref = checks::reference_stft_power(clip.samples, 2048, 512);
        if (ref.size() != spec.frames) return {false, "frame count mismatch"};
        for (std::size_t t = 0; t < spec.frames; ++t)
            worst = std::max(worst, checks::max_relative_deviation(spec.frame(t), ref[t]));
    }
    const double secs = seconds_since(start);
    return {worst <= 1e-9 && secs < 10.0, "max rel dev " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

Verdict ac2_representations() {
    const auto start = Clock::now();
    dsp::AudioClip tone;
    tone.samples.resize(dsp::kTargetSampleRate);
    for (std::size_t i = 0; i < tone.samples.size(); ++i)
        tone.samples[i] = 0.5 * std::sin(2.0 * std::numbers::pi * 440.0 * i / dsp::kTargetSampleRate);
    const double bin_hz = dsp::kTargetSampleRate / 2048.0;
    const double tone_bin_hz = std::round(440.0 / bin_hz) * bin_hz;
    const auto inner = dsp::interior_frames(tone.samples.size());
    const auto chroma = dsp::compute_feature(tone, dsp::FeatureKind::Chromagram);
    const auto centroid = dsp::compute_feature(tone, dsp::FeatureKind::SpectralCentroid);
    const auto rolloff = dsp::compute_feature(tone, dsp::FeatureKind::SpectralRolloff);
    for (std::size_t t = inner.first; t < inner.last; ++t) {
        std::size_t arg = 0;
        for (std::size_t d = 1; d < 12; ++d)
            if (chroma.at(t, d) > chroma.at(t, arg)) arg = d;
        if (arg != 9) return {false, "chroma argmax " + std::to_string(arg) + " at frame " + std::to_string(t)};
        if (std::abs(centroid.at(t, 0) - 440.0) > bin_hz) return {false, "centroid " + fmt(centroid.at(t, 0))};
        if (rolloff.at(t, 0) != tone_bin_hz) return {false, "rolloff " + fmt(rolloff.at(t, 0), 10)};
    }

    dsp::AudioClip silence;
    silence.samples.assign(dsp::kTargetSampleRate, 0.0);
    const double c0 = std::sqrt(40.0) * std::log(dsp::kLogFloor);
    const auto mfcc = dsp::compute_feature(silence, dsp::FeatureKind::Mfcc);
    for (std::size_t t = 0; t < mfcc.frames; ++t) {
        if (std::abs(mfcc.at(t, 0) - c0) > 1e-9) return {false, "silent c0 " + fmt(mfcc.at(t, 0), 12)};
        for (std::size_t d = 1; d < mfcc.dims; ++d)
            if (std::abs(mfcc.at(t, d)) > 1e-9) return {false, "silent mfcc c" + std::to_string(d)};
    }
    for (auto kind : {dsp::FeatureKind::SpectralCentroid, dsp::FeatureKind::SpectralRolloff,
                      dsp::FeatureKind::Chromagram, dsp::FeatureKind::MfccScaled, dsp::FeatureKind::Waveplot}) {
        for (double v : dsp::compute_feature(silence, kind).values)
            if (v != 0.0) return {false, "silent " + std::string(dsp::to_string(kind)) + " not zero"};
    }
    const double secs = seconds_since(start);
    return {secs < 5.0, std::to_string(inner.last - inner.first) + " interior frames, " + fmt(secs, 3) + " s"};
}

Verdict ac3_gradients() {
    const auto start = Clock::now();
    Rng rng(77);
    std::size_t checked = 0;
    double worst_rel = 0.0;
    for (std::uint64_t k = 0; k < 10; ++k) {
        std::vector<std::size_t> dims{2 + rng.below(7)};
        const std::size_t hidden_layers = rng.below(3);
        for (std::size_t h = 0; h < hidden_layers; ++h) dims.push_back(2 + rng.below(8));
        dims.push_back(2 + rng.below(4));
        auto model = nn::init_model(dims, 500 + k);
        for (auto& l : model.layers)
            for (auto& b : l.biases) b = rng.uniform(-0.2, 0.2);
        const std::size_t n = 1 + rng.below(8);
        nn::LabeledBatch batch{nn::Matrix(n, dims.front()), {}};
        for (auto& v : batch.inputs.data) v = rng.uniform(-1.5, 1.5);
        for (std::size_t i = 0; i < n; ++i) batch.labels.push_back(static_cast<int>(rng.below(dims.back())));
        const double l1 = k % 2 ? 1e-3 : 0.0;
        const auto analytic = nn::loss_and_gradients(model, batch, l1).grads;
        const auto numeric = checks::finite_difference_gradients(model, batch, l1);
        const auto cmp = checks::compare_gradients(analytic, numeric, 1e-6, 1e-4);
        checked += cmp.checked;
        worst_rel = std::max(worst_rel, cmp.max_rel_error);
        if (cmp.failures)
            return {false, "instance " + std::to_string(k) + ": " + std::to_string(cmp.failures) + " entries"};
    }
    const double secs = seconds_since(start);
    return {secs < 10.0, std::to_string(checked) + " entries, max rel " + fmt(worst_rel) + ", " + fmt(secs, 3) + " s"};
}

Verdict ac4_adam() {
    // Scalar weight w0 = 0.5, gradients 0.2 then -0.4, lr 0.01.
    auto model = nn::make_model(std::vector<std::size_t>{1, 1});
    model.layers[0].weights[0] = 0.5;
    auto state = nn::make_adam_state(model);
    nn::adam_step(model, {{{0.2}}, {{0.0}}}, state, 0.01);
    const double w1 = model.layers[0].weights[0];
    nn::adam_step(model, {{{-0.4}}, {{0.0}}}, state, 0.01);
    const double w2 = model.layers[0].weights[0];

    // m1 = 0.02, v1 = 4e-5, m_hat = 0.2, v_hat = 0.04: step 0.01 * 0.2 / (0.2 + 1e-8).
    const double e1 = 0.5 - 0.01 * 0.2 / (0.2 + 1e-8);
    // m2 = 0.018 - 0.04 = -0.022, v2 = 3.996e-5 + 1.6e-4 = 1.9996e-4.
    const double m_hat = -0.022 / (1.0 - 0.81);
    const double v_hat = 1.9996e-4 / (1.0 - 0.998001);
    const double e2 = e1 - 0.01 * m_hat / (std::sqrt(v_hat) + 1e-8);
    const double err = std::max(std::abs(w1 - e1), std::abs(w2 - e2));
    return {err <= 1e-12 && state.t == 2, "w1 " + fmt(w1, 15) + ", w2 " + fmt(w2, 15) + ", err " + fmt(err)};
}

Verdict ac5_transfer_identity() {
    const std::vector<std::size_t> vdims{1024, 512, 4}, fdims{2560, 512, 4};
    auto video = nn::init_model(vdims, 11);
    Rng rng(12);
    for (auto& l : video.layers)
        for (auto& b : l.biases) b = rng.uniform(-0.1, 0.1);
    const auto fused = fusion::transfer_init(video, fdims, 13).model;
    nn::Matrix v(100, 1024), x(100, 2560, 0.0);
    for (std::size_t r = 0; r < 100; ++r)
        for (std::size_t j = 0; j < 1024; ++j) x.at(r, 1536 + j) = v.at(r, j) = rng.uniform(0.0, 4.0);
    const auto lv = nn::forward(video, v);
    const auto lf = nn::forward(fused, x);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < lv.data.size(); ++i) differing += lv.data[i] != lf.data[i];
    return {differing == 0, "100 inputs, " + std::to_string(differing) + " differing logits"};
}

Verdict ac6_desk_fusion() {
    const auto& d = desk();
    const auto out = run_dir(dsp::FeatureKind::Chromagram);
    const double secs = d.synth_seconds + full_run(dsp::FeatureKind::Chromagram, out);
    const auto j = nlohmann::json::parse(read_file_bytes((out / kReportFile).string()));
    const double a = j["accuracy"]["audio"], v = j["accuracy"]["video"], f = j["accuracy"]["fusion"];
    const bool ok = f >= std::max(a, v) + 0.05 && f >= 0.95 && secs <= 300.0;
    return {ok, "audio " + fmt(a) + ", video " + fmt(v) + ", fusion " + fmt(f) + ", " + fmt(secs, 3) + " s"};
}

Verdict ac7_ranking_report() {
    std::vector<fs::path> dirs;
    for (auto kind : dsp::kAllFeatureKinds) {
        const auto dir = run_dir(kind);
        if (!fs::exists(dir / kReportFile)) full_run(kind, dir);
        dirs.push_back(dir);
    }
    const auto table = load_comparison(dirs);
    if (table.rows.size() != 6 || !table.best_audio || !table.best_fusion) return {false, "incomplete table"};
    const auto md = render_markdown(table);
    write_file_bytes((g_work / "report.md").string(), md);
    write_file_bytes((g_work / "report.csv").string(), render_csv(table));
    const std::string audio_line =
        "Best audio-only representation: " + std::string(dsp::display_name(table.rows[*table.best_audio].kind));
    const std::string fusion_line =
        "Best fusion representation: " + std::string(dsp::display_name(table.rows[*table.best_fusion].kind));
    const bool ok = md.find(audio_line) != std::string::npos && md.find(fusion_line) != std::string::npos;
    return {ok, audio_line + "; " + fusion_line};
}

Verdict ac8_determinism() {
    const auto& d = desk();
    const auto emb = run_dir(dsp::FeatureKind::Chromagram);
    if (!fs::exists(emb / kAudioEmbeddingsFile)) full_run(dsp::FeatureKind::Chromagram, emb);
    auto cfg = d.config;
    const auto a = g_work / "determinism_a", b = g_work / "determinism_b";
    for (const auto& dir : {a, b}) {
        fs::remove_all(dir);
        cmd_train(d.manifest, {cfg, emb, dir});
    }
    for (const char* f : {kReportFile, kAudioModelFile, kVideoModelFile, kFusionModelFile})
        if (read_file_bytes((a / f).string()) != read_file_bytes((b / f).string()))
            return {false, std::string(f) + " differs"};
    return {true, "report.json and three model files byte-identical"};
}

Verdict ac9_shapes() {
    const auto& d = desk();
    const auto src = run_dir(dsp::FeatureKind::Chromagram);
    if (!fs::exists(src / kAudioEmbeddingsFile)) full_run(dsp::FeatureKind::Chromagram, src);
    auto cfg = d.config;
    for (auto* p : {&cfg.train.audio, &cfg.train.video, &cfg.train.fusion}) p->epochs = 0;

    const auto expect_shape_error = [&](const char* which, const embed::EmbeddingFile& bad) -> std::string {
        const auto dir = g_work / (std::string("shape_") + which);
        fs::remove_all(dir);
        fs::create_directories(dir);
        fs::copy_file(src / kAudioEmbeddingsFile, dir / kAudioEmbeddingsFile);
        fs::copy_file(src / kVideoEmbeddingsFile, dir / kVideoEmbeddingsFile);
        fs::copy_file(src / kEmbeddingsInfoFile, dir / kEmbeddingsInfoFile);
        const char* target = bad.modality == embed::Modality::Audio ? kAudioEmbeddingsFile : kVideoEmbeddingsFile;
        embed::write_embeddings(bad, (dir / target).string());
        try {
            cmd_train(d.manifest, {cfg, dir, dir / "out"});
        } catch (const ShapeMismatch&) {
            return {};
        } catch (const std::exception& e) {
            return std::string(which) + ": wrong error type: " + e.what();
        }
        return std::string(which) + " accepted";
    };

    embed::EmbeddingFile audio;
    audio.cols = 1535;
    for (const auto& e : d.manifest.entries) audio.records.push_back({e.clip_id, std::vector<float>(1535, 0.1f)});
    embed::EmbeddingFile video;
    video.modality = embed::Modality::Video;
    video.rows = 24;
    video.cols = 1024;
    for (const auto& e : d.manifest.entries) video.records.push_back({e.clip_id, std::vector<float>(24 * 1024, 0.1f)});
    for (const auto& msg : {expect_shape_error("audio_1535", audio), expect_shape_error("video_24x1024", video)})
        if (!msg.empty()) return {false, msg};

    const auto images = g_work / "shape_images";
    fs::remove_all(images);
    DatasetManifest one = d.manifest;
    one.entries.resize(1);
    for (auto kind : dsp::kAllFeatureKinds) {
        if (cmd_repr(one, {kind, images, 1}).written != 1) return {false, "repr failed"};
        const auto img = image::read_png((images / image::image_file_name(one.entries[0].clip_id, kind)).string());
        if (img.pixels.size() != image::kImageBytes) return {false, "image is not 224 x 224 x 3"};
    }
    return {true, "1535 and 24 x 1024 rejected with ShapeMismatch, 6 images 224 x 224 x 3"};
}

}  // namespace

int main(int argc, char** argv) {
    g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "maivar_acceptance";
    fs::create_directories(g_work);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"AC1 stft matches direct DFT", ac1_stft_oracle},
        {"AC2 tone and silence representations", ac2_representations},
        {"AC3 analytic vs finite-difference gradients", ac3_gradients},
        {"AC4 Adam two-step trajectory", ac4_adam},
        {"AC5 transfer identity", ac5_transfer_identity},
        {"AC6 desk-scale fusion beats both modalities", ac6_desk_fusion},
        {"AC7 best audio and best fusion reported", ac7_ranking_report},
        {"AC8 repeat train runs byte-identical", ac8_determinism},
        {"AC9 shape contracts", ac9_shapes},
    };

    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Verdict v{false, ""};
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += !v.passed;
        std::printf("%s %s (%s)\n", v.passed ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
