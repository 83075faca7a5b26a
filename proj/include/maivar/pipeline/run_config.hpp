#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "maivar/dsp/features.hpp"
#include "maivar/fusion/run.hpp"

namespace maivar::pipeline {

struct RunConfig {
    dsp::FeatureKind kind = dsp::FeatureKind::Chromagram;
    std::uint64_t seed = 0;
    std::uint64_t extractor_seed = 0;
    fusion::MaivarConfig train{};
    std::size_t jobs = 1;
};

// extractor_seed = seed; audio, video, fusion seeds = seed + 1, + 2, + 3.
void set_global_seed(RunConfig& cfg, std::uint64_t seed) noexcept;

RunConfig default_run_config(std::uint64_t seed = 0);

// `key = value` lines, `#` comments. Keys:
//   kind, seed, extractor_seed, hidden (comma list, may be empty),
//   reduction (mean_segments|flatten), transfer (true|false), jobs,
//   <phase>.{learning_rate,batch_size,epochs,l1,seed,shuffle,beta1,beta2,eps}
//   with phase in {audio, video, fusion}.
// `seed` is applied first so explicit per-phase seeds win regardless of
// line order; `seed_override` (the --seed flag) replaces the file's seed.
// Throws ValidationError on unknown keys or unparsable values.
RunConfig parse_run_config(std::string_view text, std::optional<std::uint64_t> seed_override = {});
RunConfig load_run_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

// Canonical form; parse_run_config(format_run_config(c)) reproduces c.
std::string format_run_config(const RunConfig& cfg);

void validate(const RunConfig& cfg);

}  // namespace maivar::pipeline
