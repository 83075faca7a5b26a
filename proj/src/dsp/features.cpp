#include "maivar/dsp/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "maivar/core/errors.hpp"

namespace maivar::dsp {

std::string_view to_string(FeatureKind kind) noexcept {
    switch (kind) {
        case FeatureKind::Waveplot: return "waveplot";
        case FeatureKind::Mfcc: return "mfcc";
        case FeatureKind::MfccScaled: return "mfcc_scaled";
        case FeatureKind::SpectralCentroid: return "centroid";
        case FeatureKind::SpectralRolloff: return "rolloff";
        case FeatureKind::Chromagram: return "chromagram";
    }
    return "unknown";
}

std::string_view display_name(FeatureKind kind) noexcept {
    switch (kind) {
        case FeatureKind::Waveplot: return "Waveplot";
        case FeatureKind::Mfcc: return "MFCCs";
        case FeatureKind::MfccScaled: return "MFCCs Feature Scaling";
        case FeatureKind::SpectralCentroid: return "Spectral Centroids";
        case FeatureKind::SpectralRolloff: return "Spectral Rolloff";
        case FeatureKind::Chromagram: return "Chromagram";
    }
    return "Unknown";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) noexcept {
    for (auto kind : kAllFeatureKinds) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::vector<double> dct2(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const double s0 = std::sqrt(1.0 / n);
    const double sk = std::sqrt(2.0 / n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
        out[k] = (k == 0 ? s0 : sk) * acc;
    }
    return out;
}

std::vector<double> idct2(std::span<const double> c) {
    const std::size_t n = c.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const double s0 = std::sqrt(1.0 / n);
    const double sk = std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = s0 * c[0];
        for (std::size_t k = 1; k < n; ++k)
            acc += sk * c[k] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
        out[i] = acc;
    }
    return out;
}

FeatureTrack mfcc(const PowerSpectrogram& spec, const MelFilterbank& fb, std::size_t n_coeffs) {
    if (fb.bins != spec.bins) throw InvalidParameter("filterbank bin count does not match spectrogram");
    if (n_coeffs == 0 || n_coeffs > fb.n_mels) throw InvalidParameter("n_coeffs must be in [1, n_mels]");

    FeatureTrack track;
    track.kind = FeatureKind::Mfcc;
    track.frames = spec.frames;
    track.dims = n_coeffs;
    track.sample_rate_hz = spec.sample_rate_hz;
    track.values.resize(spec.frames * n_coeffs);

    std::vector<double> log_energy(fb.n_mels);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const auto power = spec.frame(t);
        std::fill(log_energy.begin(), log_energy.end(), 0.0);
        for (std::size_t k = 0; k < spec.bins; ++k) {
            const double p = power[k];
            if (p == 0.0) continue;
            for (std::size_t m = 0; m < fb.n_mels; ++m) log_energy[m] += fb.at(k, m) * p;
        }
        for (auto& e : log_energy) e = std::log(std::max(e, kLogFloor));
        const auto coeffs = dct2(log_energy);
        std::copy_n(coeffs.begin(), n_coeffs, track.values.begin() + static_cast<std::ptrdiff_t>(t * n_coeffs));
    }
    return track;
}

FeatureTrack mfcc_feature_scaled(const FeatureTrack& track) {
    if (track.kind != FeatureKind::Mfcc) throw InvalidParameter("feature scaling expects an MFCC track");
    if (track.frames < 2) throw InsufficientFrames("feature scaling needs at least 2 frames");

    FeatureTrack out = track;
    out.kind = FeatureKind::MfccScaled;
    const double n = static_cast<double>(track.frames);
    for (std::size_t d = 0; d < track.dims; ++d) {
        double mean = 0.0;
        for (std::size_t t = 0; t < track.frames; ++t) mean += track.at(t, d);
        mean /= n;
        double ss = 0.0;
        for (std::size_t t = 0; t < track.frames; ++t) {
            const double dev = track.at(t, d) - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / (n - 1.0));
        // Constant rows leave only rounding noise in `dev`; treat as zero variance.
        const bool degenerate = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
        for (std::size_t t = 0; t < track.frames; ++t)
            out.at(t, d) = degenerate ? 0.0 : (track.at(t, d) - mean) / sd;
    }
    return out;
}

FeatureTrack spectral_centroid(const PowerSpectrogram& spec) {
    FeatureTrack track;
    track.kind = FeatureKind::SpectralCentroid;
    track.frames = spec.frames;
    track.dims = 1;
    track.sample_rate_hz = spec.sample_rate_hz;
    track.values.resize(spec.frames);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const auto power = spec.frame(t);
        double total = 0.0;
        double weighted = 0.0;
        for (std::size_t k = 0; k < spec.bins; ++k) {
            total += power[k];
            weighted += k * spec.bin_hz * power[k];
        }
        track.values[t] = total < kSilencePower ? 0.0 : weighted / total;
    }
    return track;
}

FeatureTrack spectral_rolloff(const PowerSpectrogram& spec, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidParameter("rolloff fraction must be in (0, 1]");

    FeatureTrack track;
    track.kind = FeatureKind::SpectralRolloff;
    track.frames = spec.frames;
    track.dims = 1;
    track.sample_rate_hz = spec.sample_rate_hz;
    track.values.resize(spec.frames);
    std::vector<double> cumulative(spec.bins);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const auto power = spec.frame(t);
        double running = 0.0;
        for (std::size_t k = 0; k < spec.bins; ++k) {
            running += power[k];
            cumulative[k] = running;
        }
        // The threshold is taken against the same running sum, so fraction 1
        // lands exactly on the last non-zero bin.
        const double total = running;
        if (total < kSilencePower) {
            track.values[t] = 0.0;
            continue;
        }
        const double threshold = fraction * total;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), threshold);
        const auto k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(), spec.bins - 1));
        track.values[t] = k * spec.bin_hz;
    }
    return track;
}

int pitch_class(double hz, double tuning_a4_hz) noexcept {
    if (!(hz > 0.0)) return -1;
    const double midi = 69.0 + 12.0 * std::log2(hz / tuning_a4_hz);
    const auto note = static_cast<long long>(std::llround(midi));
    return static_cast<int>(((note % 12) + 12) % 12);
}

FeatureTrack chromagram(const PowerSpectrogram& spec, double tuning_a4_hz) {
    if (!(tuning_a4_hz > 0.0)) throw InvalidParameter("tuning reference must be positive");

    std::vector<int> bin_class(spec.bins);
    for (std::size_t k = 0; k < spec.bins; ++k) bin_class[k] = pitch_class(k * spec.bin_hz, tuning_a4_hz);

    FeatureTrack track;
    track.kind = FeatureKind::Chromagram;
    track.frames = spec.frames;
    track.dims = 12;
    track.sample_rate_hz = spec.sample_rate_hz;
    track.values.assign(spec.frames * 12, 0.0);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const auto power = spec.frame(t);
        double* row = track.values.data() + t * 12;
        double total = 0.0;
        for (std::size_t k = 0; k < spec.bins; ++k) {
            if (bin_class[k] < 0) continue;
            row[bin_class[k]] += power[k];
            total += power[k];
        }
        if (total < kSilencePower) {
            std::fill_n(row, 12, 0.0);
            continue;
        }
        const double peak = *std::max_element(row, row + 12);
        for (int c = 0; c < 12; ++c) row[c] /= peak;
    }
    return track;
}

FeatureTrack waveplot_track(const AudioClip& clip, std::size_t columns) {
    if (columns == 0) throw InvalidParameter("waveplot needs at least one column");
    validate(clip);

    const std::size_t n = clip.samples.size();
    FeatureTrack track;
    track.kind = FeatureKind::Waveplot;
    track.frames = columns;
    track.dims = 2;
    track.sample_rate_hz = clip.sample_rate_hz;
    track.values.resize(columns * 2);
    for (std::size_t c = 0; c < columns; ++c) {
        std::size_t begin = c * n / columns;
        std::size_t end = (c + 1) * n / columns;
        // More columns than samples: an empty span shows its nearest sample.
        if (end <= begin) end = std::min(begin + 1, n);
        if (begin >= n) begin = n - 1;
        const auto [lo, hi] = std::minmax_element(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                                  clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
        track.at(c, 0) = *lo;
        track.at(c, 1) = *hi;
    }
    return track;
}

FeatureTrack compute_feature(const AudioClip& clip, FeatureKind kind, const AnalysisConfig& cfg) {
    if (kind == FeatureKind::Waveplot) return waveplot_track(clip, cfg.waveplot_columns);

    const auto spec = stft_power(clip, cfg.stft);
    switch (kind) {
        case FeatureKind::SpectralCentroid: return spectral_centroid(spec);
        case FeatureKind::SpectralRolloff: return spectral_rolloff(spec, cfg.rolloff_fraction);
        case FeatureKind::Chromagram: return chromagram(spec, cfg.tuning_a4_hz);
        case FeatureKind::Mfcc:
        case FeatureKind::MfccScaled: {
            const double fmax = cfg.fmax_hz.value_or(0.5 * clip.sample_rate_hz);
            const auto fb = mel_filterbank(clip.sample_rate_hz, cfg.stft.window_len, cfg.n_mels, cfg.fmin_hz, fmax);
            auto track = mfcc(spec, fb, cfg.n_coeffs);
            return kind == FeatureKind::Mfcc ? track : mfcc_feature_scaled(track);
        }
        case FeatureKind::Waveplot: break;
    }
    return waveplot_track(clip, cfg.waveplot_columns);
}

}  // namespace maivar::dsp
