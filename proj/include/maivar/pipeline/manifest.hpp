#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maivar/fusion/run.hpp"

namespace maivar::pipeline {

enum class VideoSourceKind { FramesDir, EmbeddingFile };

struct ManifestEntry {
    std::string clip_id;
    std::filesystem::path audio_path;    // resolved against the manifest directory
    std::filesystem::path video_source;  // frames directory or .maiv file
    VideoSourceKind video_kind = VideoSourceKind::FramesDir;
    std::string video_record_id;  // record to pick from an embedding file
    std::string label;
    fusion::Split split = fusion::Split::Train;
};

// CSV with header `clip_id,audio_path,video_source,label,split`. Fields
// are plain (no quoting). A video_source ending in `.maiv` references a
// precomputed video embedding file, optionally `file.maiv#record_id`;
// anything else is a directory of frame PNGs. Relative paths resolve
// against base_dir.
struct DatasetManifest {
    std::filesystem::path base_dir;
    std::vector<ManifestEntry> entries;
    std::vector<std::string> classes;  // sorted unique labels

    // Index of `label` in classes, or -1.
    int label_index(std::string_view label) const noexcept;
    std::size_t count(fusion::Split split) const noexcept;
};

// Throws ValidationError on a bad header, wrong field count, empty field,
// unknown split or duplicate clip_id.
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
DatasetManifest read_manifest(const std::filesystem::path& path);

// Paths written relative to `base_dir` where possible.
std::string format_manifest(const DatasetManifest& manifest);

// Both splits non-empty; throws ValidationError.
void require_both_splits(const DatasetManifest& manifest);

std::string_view to_string(fusion::Split split) noexcept;

}  // namespace maivar::pipeline
