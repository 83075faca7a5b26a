#include "maivar/image/render.hpp"

#include <algorithm>
#include <cmath>

#include "maivar/core/errors.hpp"

namespace maivar::image {

namespace {

constexpr std::size_t kLastRow = kImageHeight - 1;

std::size_t frame_for_column(std::size_t x, std::size_t frames) noexcept { return x * frames / kImageWidth; }

std::size_t scaled_row(double fraction_from_top) noexcept {
    const double clamped = std::clamp(fraction_from_top, 0.0, 1.0);
    return static_cast<std::size_t>(std::llround(clamped * static_cast<double>(kLastRow)));
}

void paint_column(AudioImage& img, std::size_t x, std::size_t y_from, std::size_t y_to, Rgb c) {
    if (y_from > y_to) std::swap(y_from, y_to);
    for (std::size_t y = y_from; y <= y_to; ++y) img.set(y, x, c);
}

AudioImage render_waveplot(const dsp::FeatureTrack& track, const Colormap& cmap) {
    if (track.dims != 2) throw InvalidParameter("waveplot track must have (min, max) per column");
    AudioImage img;
    const Rgb fg = cmap.lut[128];
    for (std::size_t x = 0; x < kImageWidth; ++x) {
        const std::size_t f = frame_for_column(x, track.frames);
        paint_column(img, x, amplitude_row(track.at(f, 1)), amplitude_row(track.at(f, 0)), fg);
    }
    return img;
}

AudioImage render_heatmap(const dsp::FeatureTrack& track, const Colormap& cmap) {
    const auto [lo_it, hi_it] = std::minmax_element(track.values.begin(), track.values.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;

    AudioImage img;
    for (std::size_t y = 0; y < kImageHeight; ++y) {
        const std::size_t dim = track.dims - 1 - y * track.dims / kImageHeight;
        for (std::size_t x = 0; x < kImageWidth; ++x) {
            const double v = track.at(frame_for_column(x, track.frames), dim);
            std::size_t idx = 0;
            if (range > 0.0) {
                const double s = std::clamp((v - lo) / range, 0.0, 1.0);
                idx = static_cast<std::size_t>(std::llround(s * 255.0));
            }
            img.set(y, x, cmap.lut[idx]);
        }
    }
    return img;
}

AudioImage render_polyline(const dsp::FeatureTrack& track, const Colormap& cmap) {
    if (track.dims != 1) throw InvalidParameter("Hz-valued track must have one value per frame");
    if (track.sample_rate_hz <= 0) throw InvalidParameter("Hz-valued track needs a sample rate");
    const double nyquist = 0.5 * track.sample_rate_hz;
    auto row_of = [&](std::size_t x) { return scaled_row(1.0 - track.at(frame_for_column(x, track.frames), 0) / nyquist); };

    AudioImage img;
    const Rgb fg = cmap.lut[255];
    for (std::size_t x = 0; x < kImageWidth; ++x) {
        const std::size_t y0 = row_of(x);
        const std::size_t y1 = x + 1 < kImageWidth ? row_of(x + 1) : y0;
        std::size_t top = std::min(y0, y1);
        std::size_t bottom = std::max(y0, y1);
        // Second stroke pixel goes below the line, or above at the bottom edge.
        if (bottom < kLastRow) {
            ++bottom;
        } else if (top > 0) {
            --top;
        }
        paint_column(img, x, top, bottom, fg);
    }
    return img;
}

}  // namespace

std::size_t amplitude_row(double amplitude) noexcept { return scaled_row((1.0 - amplitude) / 2.0); }

AudioImage render(const dsp::FeatureTrack& track, const Colormap& cmap) {
    if (track.frames == 0 || track.dims == 0 || track.values.size() != track.frames * track.dims)
        throw EmptyTrack("cannot render an empty feature track");
    for (double v : track.values) {
        if (!std::isfinite(v)) throw InvalidParameter("feature track contains non-finite values");
    }

    AudioImage img;
    switch (track.kind) {
        case dsp::FeatureKind::Waveplot: img = render_waveplot(track, cmap); break;
        case dsp::FeatureKind::Mfcc:
        case dsp::FeatureKind::MfccScaled:
        case dsp::FeatureKind::Chromagram: img = render_heatmap(track, cmap); break;
        case dsp::FeatureKind::SpectralCentroid:
        case dsp::FeatureKind::SpectralRolloff: img = render_polyline(track, cmap); break;
    }
    img.kind = track.kind;
    return img;
}

}  // namespace maivar::image
