#pragma once

#include <cstddef>
#include <vector>

namespace maivar::dsp {

// HTK mel scale: 2595 log10(1 + f / 700).
double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

// Triangular filters, unit peak, bins x n_mels row-major.
struct MelFilterbank {
    std::size_t n_mels = 0;
    std::size_t bins = 0;
    std::vector<double> weights;
    double fmin_hz = 0.0;
    double fmax_hz = 0.0;

    double at(std::size_t bin, std::size_t mel) const noexcept { return weights[bin * n_mels + mel]; }
};

// Filter m rises from mel point m to m+1 and falls to m+2, with the
// n_mels + 2 points equally spaced in mel between fmin and fmax. Throws
// InvalidParameter on a bad frequency range and DegenerateFilterbank when
// any filter covers no FFT bin.
MelFilterbank mel_filterbank(int sample_rate_hz, std::size_t window_len, std::size_t n_mels,
                             double fmin_hz, double fmax_hz);

}  // namespace maivar::dsp
