#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "maivar/dsp/audio_clip.hpp"

namespace maivar::dsp {

enum class WindowKind { Hann };

struct StftConfig {
    std::size_t window_len = 2048;  // power of two
    std::size_t hop_len = 512;
    WindowKind window = WindowKind::Hann;
};

void validate(const StftConfig& cfg);

// Linear power, frames x bins, row-major.
struct PowerSpectrogram {
    std::size_t frames = 0;
    std::size_t bins = 0;  // window_len / 2 + 1
    std::vector<double> values;
    double bin_hz = 0.0;
    double hop_s = 0.0;
    int sample_rate_hz = 0;

    double at(std::size_t frame, std::size_t bin) const noexcept { return values[frame * bins + bin]; }
    std::span<const double> frame(std::size_t t) const noexcept {
        return std::span<const double>(values).subspan(t * bins, bins);
    }
    double nyquist_hz() const noexcept { return 0.5 * sample_rate_hz; }
};

// Periodic window of length n (Hann: 0.5 - 0.5 cos(2 pi i / n)).
std::vector<double> make_window(WindowKind kind, std::size_t n);

// In-place iterative radix-2 FFT, unnormalized forward transform
// X[k] = sum_n x[n] exp(-2 pi i k n / N). Size must be a power of two.
void fft_inplace(std::span<std::complex<double>> data);

// |FFT(frame)|^2 for bins 0..N/2 of a real frame.
std::vector<double> power_spectrum(std::span<const double> frame);

// Centered STFT: the clip is reflect-padded by window_len/2 on both sides
// so frame t is centered on sample t * hop_len; 1 + len / hop_len frames.
// Throws EmptySignal when the clip is shorter than one hop (or than two
// samples, which reflection needs).
PowerSpectrogram stft_power(const AudioClip& clip, const StftConfig& cfg = {});

// Frames [first, last) whose window lies entirely inside the unpadded clip.
// Edge frames see the mirrored padding, whose slope discontinuity leaks
// broadband energy; steady-state checks use only this range.
struct FrameRange {
    std::size_t first = 0;
    std::size_t last = 0;
    bool empty() const noexcept { return last <= first; }
};
FrameRange interior_frames(std::size_t clip_len, const StftConfig& cfg = {});

}  // namespace maivar::dsp
