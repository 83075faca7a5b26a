#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "maivar/dsp/audio_clip.hpp"
#include "maivar/dsp/mel.hpp"
#include "maivar/dsp/stft.hpp"

namespace maivar::dsp {

enum class FeatureKind { Waveplot, Mfcc, MfccScaled, SpectralCentroid, SpectralRolloff, Chromagram };

// All six kinds in the order used by comparison tables.
inline constexpr std::array<FeatureKind, 6> kAllFeatureKinds = {
    FeatureKind::Waveplot,   FeatureKind::SpectralCentroid, FeatureKind::SpectralRolloff,
    FeatureKind::Mfcc,       FeatureKind::MfccScaled,       FeatureKind::Chromagram,
};

// Short machine name ("waveplot", "mfcc", ...) used in file names and CLI.
std::string_view to_string(FeatureKind kind) noexcept;
// Human-readable row label ("Spectral Centroids", ...).
std::string_view display_name(FeatureKind kind) noexcept;
std::optional<FeatureKind> parse_feature_kind(std::string_view name) noexcept;

// frames x dims, row-major. sample_rate_hz is carried along so Hz-valued
// tracks can be plotted against Nyquist.
struct FeatureTrack {
    FeatureKind kind = FeatureKind::Mfcc;
    std::size_t frames = 0;
    std::size_t dims = 0;
    std::vector<double> values;
    int sample_rate_hz = kTargetSampleRate;

    double at(std::size_t frame, std::size_t dim) const noexcept { return values[frame * dims + dim]; }
    double& at(std::size_t frame, std::size_t dim) noexcept { return values[frame * dims + dim]; }
};

inline constexpr double kLogFloor = 1e-10;
inline constexpr double kSilencePower = 1e-12;

// Fixed analysis parameters for rendering.
struct AnalysisConfig {
    StftConfig stft{};
    std::size_t n_mels = 40;
    std::size_t n_coeffs = 20;
    double fmin_hz = 0.0;
    std::optional<double> fmax_hz{};  // Nyquist when unset
    double rolloff_fraction = 0.85;
    double tuning_a4_hz = 440.0;
    std::size_t waveplot_columns = 224;
};

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> dct2(std::span<const double> x);
std::vector<double> idct2(std::span<const double> c);

FeatureTrack mfcc(const PowerSpectrogram& spec, const MelFilterbank& fb, std::size_t n_coeffs);
FeatureTrack mfcc_feature_scaled(const FeatureTrack& track);
FeatureTrack spectral_centroid(const PowerSpectrogram& spec);
FeatureTrack spectral_rolloff(const PowerSpectrogram& spec, double fraction = 0.85);
FeatureTrack chromagram(const PowerSpectrogram& spec, double tuning_a4_hz = 440.0);
FeatureTrack waveplot_track(const AudioClip& clip, std::size_t columns);

// Pitch class (0 = C) nearest to a frequency, or -1 for f <= 0.
int pitch_class(double hz, double tuning_a4_hz = 440.0) noexcept;

// Full chain clip -> track for one kind.
FeatureTrack compute_feature(const AudioClip& clip, FeatureKind kind, const AnalysisConfig& cfg = {});

}  // namespace maivar::dsp
