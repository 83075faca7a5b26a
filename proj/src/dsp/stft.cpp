#include "maivar/dsp/stft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "maivar/core/errors.hpp"

namespace maivar::dsp {

namespace {

// Reflect index i into [0, n) without repeating the edge sample
// (numpy "reflect"); periodic for offsets longer than the signal.
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
    const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
    std::ptrdiff_t m = i % period;
    if (m < 0) m += period;
    if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
    return static_cast<std::size_t>(m);
}

}  // namespace

void validate(const StftConfig& cfg) {
    if (cfg.window_len < 2 || !std::has_single_bit(cfg.window_len))
        throw InvalidParameter("window_len must be a power of two >= 2");
    if (cfg.hop_len == 0 || cfg.hop_len > cfg.window_len)
        throw InvalidParameter("hop_len must satisfy 0 < hop_len <= window_len");
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
    std::vector<double> w(n);
    switch (kind) {
        case WindowKind::Hann:
            for (std::size_t i = 0; i < n; ++i)
                w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
            break;
    }
    return w;
}

void fft_inplace(std::span<std::complex<double>> data) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    if (!std::has_single_bit(n)) throw InvalidParameter("FFT size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // Twiddles from direct cos/sin rather than recurrence so errors stay
    // at a few ulps for large n.
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(angle), std::sin(angle)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto t = twiddle[k * stride] * data[start + k + half];
                const auto u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }
}

std::vector<double> power_spectrum(std::span<const double> frame) {
    std::vector<std::complex<double>> buf(frame.begin(), frame.end());
    fft_inplace(buf);
    std::vector<double> power(frame.size() / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
    return power;
}

PowerSpectrogram stft_power(const AudioClip& clip, const StftConfig& cfg) {
    validate(cfg);
    validate(clip);
    const std::size_t len = clip.samples.size();
    if (len < cfg.hop_len || len < 2)
        throw EmptySignal("clip '" + clip.id + "' is shorter than one hop");

    const std::size_t n = cfg.window_len;
    const auto pad = static_cast<std::ptrdiff_t>(n / 2);
    const auto window = make_window(cfg.window, n);

    PowerSpectrogram spec;
    spec.frames = 1 + len / cfg.hop_len;
    spec.bins = n / 2 + 1;
    spec.values.resize(spec.frames * spec.bins);
    spec.sample_rate_hz = clip.sample_rate_hz;
    spec.bin_hz = static_cast<double>(clip.sample_rate_hz) / static_cast<double>(n);
    spec.hop_s = static_cast<double>(cfg.hop_len) / clip.sample_rate_hz;

    std::vector<std::complex<double>> buf(n);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const auto origin = static_cast<std::ptrdiff_t>(t * cfg.hop_len) - pad;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t src = reflect_index(origin + static_cast<std::ptrdiff_t>(i), len);
            buf[i] = {clip.samples[src] * window[i], 0.0};
        }
        fft_inplace(buf);
        double* row = spec.values.data() + t * spec.bins;
        for (std::size_t k = 0; k < spec.bins; ++k) row[k] = std::norm(buf[k]);
    }
    return spec;
}

FrameRange interior_frames(std::size_t clip_len, const StftConfig& cfg) {
    validate(cfg);
    const std::size_t half = cfg.window_len / 2;
    if (clip_len < cfg.window_len) return {};
    const std::size_t first = (half + cfg.hop_len - 1) / cfg.hop_len;
    const std::size_t last = (clip_len - half) / cfg.hop_len + 1;
    return {first, last};
}

}  // namespace maivar::dsp
