#pragma once

#include <string>
#include <vector>

namespace maivar::dsp {

// Sample rate every clip is resampled to at ingest.
inline constexpr int kTargetSampleRate = 22050;

// One action instance's mono signal.
struct AudioClip {
    std::string id;
    std::vector<double> samples;  // in [-1, 1]
    int sample_rate_hz = kTargetSampleRate;

    double duration_s() const noexcept {
        return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
    }
};

// Throws EmptySignal for an empty clip, InvalidParameter for a
// non-positive rate or a sample that is non-finite or outside [-1, 1].
void validate(const AudioClip& clip);

}  // namespace maivar::dsp
