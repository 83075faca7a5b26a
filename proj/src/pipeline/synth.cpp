#include "maivar/pipeline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"
#include "maivar/dsp/wav.hpp"
#include "maivar/image/png_io.hpp"
#include "maivar/pipeline/manifest.hpp"
#include "maivar/pipeline/run_config.hpp"
#include "maivar/pipeline/worker_pool.hpp"

namespace maivar::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kAudioStream = 0x415544ULL;
constexpr std::uint64_t kVideoStream = 0x564944ULL;
constexpr std::size_t kBlock = 28;  // 8 x 8 grid of noise blocks
constexpr std::size_t kSquare = 56;

std::string padded(std::size_t v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, v);
    return buf;
}

dsp::AudioClip synth_audio(const std::string& id, std::size_t token, double seconds, std::uint64_t key) {
    Rng rng(key);
    const double f0 = token_fundamental_hz(token);
    const double amp[3] = {0.45 * rng.uniform(0.85, 1.15), 0.20 * rng.uniform(0.85, 1.15), 0.10 * rng.uniform(0.85, 1.15)};
    const double phase[3] = {rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(0.0, 2.0 * std::numbers::pi),
                             rng.uniform(0.0, 2.0 * std::numbers::pi)};
    dsp::AudioClip clip;
    clip.id = id;
    clip.sample_rate_hz = dsp::kTargetSampleRate;
    const auto n = static_cast<std::size_t>(std::llround(seconds * clip.sample_rate_hz));
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / clip.sample_rate_hz;
        double s = rng.uniform(-0.03, 0.03);
        for (int h = 0; h < 3; ++h) s += amp[h] * std::sin(2.0 * std::numbers::pi * f0 * (h + 1) * t + phase[h]);
        clip.samples[i] = s;
    }
    return clip;
}

image::AudioImage synth_frame(const std::string& id, std::size_t token, Rng& rng) {
    image::AudioImage img;
    img.clip_id = id;
    for (std::size_t by = 0; by < image::kImageHeight / kBlock; ++by)
        for (std::size_t bx = 0; bx < image::kImageWidth / kBlock; ++bx) {
            const auto g = static_cast<std::uint8_t>(70 + rng.below(61));
            for (std::size_t y = by * kBlock; y < (by + 1) * kBlock; ++y)
                for (std::size_t x = bx * kBlock; x < (bx + 1) * kBlock; ++x) img.set(y, x, {g, g, g});
        }
    if (token == 0) return img;

    // Tokens 1.. occupy a 3 x 3 layout of anchor cells; later tokens cycle
    // the colour so positions can repeat.
    const std::size_t p = token - 1;
    const std::size_t cell_y = (p % 9) / 3, cell_x = p % 3;
    static constexpr image::Rgb kColours[] = {{220, 80, 40}, {40, 200, 90}, {60, 90, 230}, {230, 210, 50}};
    const auto colour = kColours[(p / 9) % 4];
    const auto jitter = [&] { return static_cast<std::size_t>(rng.below(13)); };  // 0..12 px
    const std::size_t y0 = 10 + cell_y * 70 + jitter();
    const std::size_t x0 = 10 + cell_x * 70 + jitter();
    for (std::size_t y = y0; y < std::min(y0 + kSquare, image::kImageHeight); ++y)
        for (std::size_t x = x0; x < std::min(x0 + kSquare, image::kImageWidth); ++x) img.set(y, x, colour);
    return img;
}

RunConfig desk_scale_config(std::uint64_t seed) {
    RunConfig cfg = default_run_config(seed);
    cfg.train.hidden = {128};
    cfg.train.audio.epochs = 40;
    cfg.train.video.epochs = 40;
    cfg.train.fusion.epochs = 150;
    return cfg;
}

}  // namespace

std::size_t audio_token(std::size_t label, std::size_t classes) noexcept { return std::min(label, classes / 2); }

std::size_t video_token(std::size_t label, std::size_t classes) noexcept {
    const std::size_t half = classes / 2;
    return label + 1 > half ? label + 1 - half : 0;
}

double token_fundamental_hz(std::size_t token) noexcept { return 220.0 * std::exp2(static_cast<double>(token) / 12.0); }

SynthResult cmd_synth(const SynthOptions& opts) {
    if (opts.classes < 2) throw ValidationError("synth needs at least 2 classes");
    if (opts.clips_per_class < 5) throw ValidationError("synth needs at least 5 clips per class for the 80/20 split");
    if (opts.frames_per_clip == 0) throw ValidationError("synth needs at least one frame per clip");
    if (!(opts.seconds >= 0.1 && opts.seconds <= 60.0)) throw ValidationError("synth clip length must be in [0.1, 60] s");

    const fs::path out = opts.out_dir.empty() ? fs::path(".") : opts.out_dir;
    fs::create_directories(out / "audio");
    fs::create_directories(out / "frames");

    DatasetManifest manifest;
    manifest.base_dir = out;
    for (std::size_t c = 0; c < opts.classes; ++c)
        for (std::size_t i = 0; i < opts.clips_per_class; ++i) {
            ManifestEntry e;
            e.clip_id = "c" + padded(c, 2) + "_" + padded(i, 3);
            e.label = "class_" + padded(c, 2);
            e.audio_path = out / "audio" / (e.clip_id + ".wav");
            e.video_source = out / "frames" / e.clip_id;
            e.split = i % 5 == 4 ? fusion::Split::Test : fusion::Split::Train;
            manifest.entries.push_back(std::move(e));
        }

    parallel_for(manifest.entries.size(), opts.jobs, [&](std::size_t idx) {
        const auto& e = manifest.entries[idx];
        const std::size_t label = idx / opts.clips_per_class;
        const auto clip = synth_audio(e.clip_id, audio_token(label, opts.classes), opts.seconds,
                                      derive_seed(derive_seed(opts.seed, kAudioStream), idx));
        dsp::write_wav_pcm16(e.audio_path.string(), clip);

        fs::create_directories(e.video_source);
        Rng rng(derive_seed(derive_seed(opts.seed, kVideoStream), idx));
        const std::size_t token = video_token(label, opts.classes);
        for (std::size_t f = 0; f < opts.frames_per_clip; ++f)
            image::write_png(synth_frame(e.clip_id, token, rng),
                             (e.video_source / ("frame_" + padded(f, 2) + ".png")).string());
    });

    SynthResult r;
    r.manifest = out / "manifest.csv";
    r.config = out / "run.cfg";
    write_file_bytes(r.manifest.string(), format_manifest(manifest));
    write_file_bytes(r.config.string(), format_run_config(desk_scale_config(opts.seed)));
    r.clips = manifest.entries.size();
    r.train = manifest.count(fusion::Split::Train);
    r.test = manifest.count(fusion::Split::Test);
    return r;
}

}  // namespace maivar::pipeline
