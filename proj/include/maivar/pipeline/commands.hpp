#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "maivar/embeddings/embedding.hpp"
#include "maivar/image/audio_image.hpp"
#include "maivar/image/tensor.hpp"
#include "maivar/fusion/run.hpp"
#include "maivar/pipeline/manifest.hpp"
#include "maivar/pipeline/run_config.hpp"

namespace maivar::pipeline {

inline constexpr const char* kAudioEmbeddingsFile = "audio.maiv";
inline constexpr const char* kVideoEmbeddingsFile = "video.maiv";
inline constexpr const char* kEmbeddingsInfoFile = "embeddings.json";
inline constexpr const char* kAudioModelFile = "audio.model";
inline constexpr const char* kVideoModelFile = "video.model";
inline constexpr const char* kFusionModelFile = "fusion.model";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kCurvesFile = "curves.csv";
inline constexpr const char* kConfigFile = "config.cfg";

struct ClipFailure {
    std::string clip_id;
    std::string message;
};

// --- repr -------------------------------------------------------------

struct ReprOptions {
    dsp::FeatureKind kind = dsp::FeatureKind::Chromagram;
    std::filesystem::path out_dir;
    std::size_t jobs = 1;
};

struct ReprResult {
    std::size_t written = 0;
    std::vector<ClipFailure> failures;  // in manifest order
};

// One `<clip_id>.<kind>.png` per entry. A clip whose WAV cannot be read or
// analysed is recorded in `failures`; the others are still written.
ReprResult cmd_repr(const DatasetManifest& manifest, const ReprOptions& opts);

// WAV -> 224 x 224 audio image for one representation.
image::AudioImage render_clip(const std::filesystem::path& wav, const std::string& clip_id, dsp::FeatureKind kind);

// --- extract ----------------------------------------------------------

struct ExtractOptions {
    dsp::FeatureKind kind = dsp::FeatureKind::Chromagram;
    std::uint64_t seed = 0;
    // Directory holding `<clip_id>.<kind>.png` from `repr`. Empty: render
    // each clip from its WAV in memory.
    std::filesystem::path images_dir;
    std::filesystem::path out_dir;
    std::size_t jobs = 1;
};

struct ExtractResult {
    std::size_t audio_records = 0;
    std::size_t video_records = 0;
    std::size_t video_passthrough = 0;  // copied from precomputed embedding files
    std::filesystem::path audio_file;
    std::filesystem::path video_file;
};

// Writes audio.maiv (1 x 1536 records), video.maiv (25 x 1024 records) and
// embeddings.json (kind, seed) into out_dir. Throws MissingInput for a clip
// without its audio image or video frames / record.
ExtractResult cmd_extract(const DatasetManifest& manifest, const ExtractOptions& opts);

// Sorted `*.png` frames of a clip directory, normalized.
std::vector<image::NormalizedTensor> load_frames(const std::filesystem::path& dir, const std::string& clip_id);

// --- train ------------------------------------------------------------

struct TrainOptions {
    RunConfig config;
    std::filesystem::path embeddings_dir;  // holds audio.maiv / video.maiv
    std::filesystem::path out_dir;
};

// Joins manifest entries with their embeddings. Throws MissingModality for
// the first clip (manifest order) lacking either record, ValidationError
// when a split is empty; shapes are checked by the embedding readers.
std::vector<fusion::ClipSample> assemble_samples(const DatasetManifest& manifest,
                                                 const std::vector<embed::AudioEmbedding>& audio,
                                                 const std::vector<embed::VideoEmbedding>& video);

// Validates everything, then runs the three training phases and writes
// audio.model, video.model, fusion.model, report.json, curves.csv and
// config.cfg into out_dir.
fusion::RunResult cmd_train(const DatasetManifest& manifest, const TrainOptions& opts);

// --- eval -------------------------------------------------------------

struct EvalResult {
    std::size_t n_test = 0;
    double audio_accuracy = 0.0;
    double video_accuracy = 0.0;
    double fusion_accuracy = 0.0;
};

// Reloads the three models from run_dir and scores the test split.
EvalResult cmd_eval(const DatasetManifest& manifest, const std::filesystem::path& run_dir,
                    const std::filesystem::path& embeddings_dir);

}  // namespace maivar::pipeline
