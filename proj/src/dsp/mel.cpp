#include "maivar/dsp/mel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maivar/core/errors.hpp"

namespace maivar::dsp {

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_filterbank(int sample_rate_hz, std::size_t window_len, std::size_t n_mels, double fmin_hz,
                             double fmax_hz) {
    if (sample_rate_hz <= 0 || window_len < 2) throw InvalidParameter("invalid sample rate or window length");
    if (n_mels == 0) throw InvalidParameter("n_mels must be positive");
    if (!(fmin_hz >= 0.0) || !(fmin_hz < fmax_hz) || fmax_hz > 0.5 * sample_rate_hz)
        throw InvalidParameter("mel range must satisfy 0 <= fmin < fmax <= Nyquist");

    MelFilterbank fb;
    fb.n_mels = n_mels;
    fb.bins = window_len / 2 + 1;
    fb.fmin_hz = fmin_hz;
    fb.fmax_hz = fmax_hz;
    fb.weights.assign(fb.bins * n_mels, 0.0);

    const double mel_lo = hz_to_mel(fmin_hz);
    const double mel_hi = hz_to_mel(fmax_hz);
    std::vector<double> edges(n_mels + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
    }

    const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(window_len);
    for (std::size_t m = 0; m < n_mels; ++m) {
        const double lower = edges[m];
        const double center = edges[m + 1];
        const double upper = edges[m + 2];
        bool any = false;
        for (std::size_t k = 0; k < fb.bins; ++k) {
            const double f = k * bin_hz;
            const double rise = (f - lower) / (center - lower);
            const double fall = (upper - f) / (upper - center);
            const double w = std::max(0.0, std::min(rise, fall));
            fb.weights[k * n_mels + m] = w;
            any = any || w > 0.0;
        }
        if (!any) {
            throw DegenerateFilterbank("mel filter " + std::to_string(m) + " of " + std::to_string(n_mels) +
                                       " covers no FFT bin");
        }
    }
    return fb;
}

}  // namespace maivar::dsp
