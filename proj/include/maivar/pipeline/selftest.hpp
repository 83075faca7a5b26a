#pragma once

#include <optional>
#include <string>
#include <vector>

namespace maivar::pipeline {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Names in run order: stft_oracle, tone_features, silence, gradients,
// adam, transfer_identity, determinism, shapes.
std::vector<std::string> selftest_check_names();

// Runs every check. `inject_fault` names a check whose input is corrupted
// on purpose so that it must report a failure.
std::vector<CheckOutcome> run_selftest(const std::optional<std::string>& inject_fault = {});

}  // namespace maivar::pipeline
