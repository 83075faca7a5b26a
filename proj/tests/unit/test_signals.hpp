#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "maivar/core/rng.hpp"
#include "maivar/dsp/audio_clip.hpp"

namespace maivar::testing {

inline dsp::AudioClip sine_clip(double hz, double seconds, int rate = dsp::kTargetSampleRate, double amp = 0.8) {
    dsp::AudioClip clip;
    clip.id = "sine";
    clip.sample_rate_hz = rate;
    const auto n = static_cast<std::size_t>(seconds * rate);
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        clip.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
    return clip;
}

inline dsp::AudioClip silent_clip(std::size_t n, int rate = dsp::kTargetSampleRate) {
    dsp::AudioClip clip;
    clip.id = "silence";
    clip.sample_rate_hz = rate;
    clip.samples.assign(n, 0.0);
    return clip;
}

inline dsp::AudioClip noise_clip(std::size_t n, std::uint64_t seed, double amp = 0.9) {
    dsp::AudioClip clip;
    clip.id = "noise" + std::to_string(seed);
    Rng rng(seed);
    clip.samples.resize(n);
    for (auto& s : clip.samples) s = rng.uniform(-amp, amp);
    return clip;
}

}  // namespace maivar::testing
