#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maivar/fusion/run.hpp"
#include "maivar/pipeline/manifest.hpp"
#include "maivar/pipeline/run_config.hpp"

namespace maivar::pipeline {

// report.json content. Field order is fixed; numbers use shortest
// round-trip formatting, so identical runs give identical bytes.
std::string report_json(const fusion::RunReport& report, const RunConfig& cfg, const DatasetManifest& manifest);

// `model,epoch,loss,accuracy,test_accuracy` for all three phases.
std::string curves_csv(const fusion::RunReport& report);

struct ComparisonRow {
    dsp::FeatureKind kind = dsp::FeatureKind::Chromagram;
    std::string run_dir;
    double audio_accuracy = 0.0;
    double fusion_accuracy = 0.0;
    double video_accuracy = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // representation display order, stable
    std::optional<std::size_t> best_audio;
    std::optional<std::size_t> best_fusion;
};

// Reads report.json from each directory. Throws ValidationError naming
// every directory whose report is missing or unreadable.
ComparisonTable load_comparison(const std::vector<std::filesystem::path>& run_dirs);

std::string render_markdown(const ComparisonTable& table);
std::string render_csv(const ComparisonTable& table);

}  // namespace maivar::pipeline
