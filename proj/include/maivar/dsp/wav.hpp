#pragma once

#include <string>
#include <string_view>

#include "maivar/dsp/audio_clip.hpp"

namespace maivar::dsp {

// RIFF/WAVE decoding. Accepts PCM 8/16/24/32-bit integer and 32-bit IEEE
// float (plain or WAVE_FORMAT_EXTENSIBLE), any channel count; channels are
// averaged to mono and samples clamped to [-1, 1]. Throws MalformedWav.
AudioClip decode_wav(std::string_view bytes, std::string id);
AudioClip read_wav(const std::string& path, std::string id);

// Linear-interpolation resampler. Output length is
// round(len * target / source), at least 1.
AudioClip resample_linear(const AudioClip& clip, int target_rate_hz);

// read_wav followed by resampling to kTargetSampleRate.
AudioClip load_clip(const std::string& path, std::string id);

// 16-bit PCM mono writer (samples clamped, rounded to nearest).
std::string encode_wav_pcm16(const AudioClip& clip);
void write_wav_pcm16(const std::string& path, const AudioClip& clip);

}  // namespace maivar::dsp
