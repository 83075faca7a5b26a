#pragma once

#include "maivar/image/audio_image.hpp"

namespace maivar::image {

inline constexpr Rgb kBackground{0, 0, 0};

// Deterministic track -> image mapping.
//
//   Waveplot          filled min/max envelope per column; amplitude +1 at
//                     row 0, -1 at row 223; colour LUT[128] on black.
//   Mfcc, MfccScaled, heatmap; column x shows frame floor(x * frames / 224),
//   Chromagram        row y shows dim (dims - 1) - floor(y * dims / 224);
//                     values min-max scaled per image to LUT[0..255]
//                     (all-equal values map to LUT[0]).
//   Centroid, Rolloff 2-px polyline of Hz on a 0..Nyquist axis (bottom to
//                     top), colour LUT[255] on black.
//
// Throws EmptyTrack when the track has no frames or dims.
AudioImage render(const dsp::FeatureTrack& track, const Colormap& cmap = viridis());

// Row for an amplitude in [-1, 1] on the waveplot axis.
std::size_t amplitude_row(double amplitude) noexcept;

}  // namespace maivar::image
