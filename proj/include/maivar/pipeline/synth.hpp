#pragma once

#include <cstdint>
#include <filesystem>

namespace maivar::pipeline {

// Complementary desk-scale dataset. With half = classes / 2, the audio
// token of class c is min(c, half) and the video token max(c - half + 1, 0):
// audio cannot tell apart classes >= half, video cannot tell apart
// classes < half, and the pair identifies every class.
//
// Audio: 1 s, 22050 Hz, 16-bit. Fundamental 220 * 2^(token / 12) Hz with
// 2nd and 3rd harmonics, seeded amplitudes and phases, low-level noise.
// Video: frame PNGs of block noise; tokens >= 1 add a coloured square
// whose position encodes the token.
struct SynthOptions {
    std::filesystem::path out_dir;
    std::size_t classes = 4;
    std::size_t clips_per_class = 50;
    std::uint64_t seed = 0;
    std::size_t frames_per_clip = 8;
    double seconds = 1.0;
    std::size_t jobs = 1;
};

struct SynthResult {
    std::filesystem::path manifest;
    std::filesystem::path config;  // training schedule sized for this data
    std::size_t clips = 0;
    std::size_t train = 0;
    std::size_t test = 0;
};

// Writes audio/<id>.wav, frames/<id>/frame_NN.png, manifest.csv and run.cfg.
// Clip i of each class is a test clip when i % 5 == 4.
SynthResult cmd_synth(const SynthOptions& opts);

std::size_t audio_token(std::size_t label, std::size_t classes) noexcept;
std::size_t video_token(std::size_t label, std::size_t classes) noexcept;
double token_fundamental_hz(std::size_t token) noexcept;

}  // namespace maivar::pipeline
