#include "maivar/pipeline/manifest.hpp"

#include <algorithm>
#include <set>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"

namespace maivar::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kHeader = "clip_id,audio_path,video_source,label,split";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

fs::path resolve(const fs::path& base, std::string_view p) {
    fs::path path{std::string(p)};
    return path.is_absolute() ? path : base / path;
}

std::string relative_or_absolute(const fs::path& p, const fs::path& base) {
    if (!base.empty()) {
        const auto rel = p.lexically_relative(base);
        if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    }
    return p.generic_string();
}

}  // namespace

std::string_view to_string(fusion::Split split) noexcept {
    return split == fusion::Split::Train ? "train" : "test";
}

int DatasetManifest::label_index(std::string_view label) const noexcept {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) return -1;
    return static_cast<int>(it - classes.begin());
}

std::size_t DatasetManifest::count(fusion::Split split) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [&](const ManifestEntry& e) { return e.split == split; }));
}

DatasetManifest parse_manifest(std::string_view text, const fs::path& base_dir) {
    DatasetManifest m;
    m.base_dir = base_dir;
    std::set<std::string, std::less<>> ids;
    std::set<std::string> labels;
    bool header_seen = false;
    std::size_t line_no = 0;

    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        const auto where = "manifest line " + std::to_string(line_no);
        if (!header_seen) {
            if (line != kHeader) throw ValidationError(where + ": expected header '" + std::string(kHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 5) throw ValidationError(where + ": expected 5 fields, got " + std::to_string(f.size()));
        for (const auto& field : f)
            if (trim(field).empty()) throw ValidationError(where + ": empty field");

        ManifestEntry e;
        e.clip_id = std::string(trim(f[0]));
        e.audio_path = resolve(base_dir, trim(f[1]));
        auto video = trim(f[2]);
        if (const auto hash = video.find('#'); hash != std::string_view::npos) {
            e.video_record_id = std::string(video.substr(hash + 1));
            video = video.substr(0, hash);
        }
        e.video_source = resolve(base_dir, video);
        e.video_kind = e.video_source.extension() == ".maiv" ? VideoSourceKind::EmbeddingFile : VideoSourceKind::FramesDir;
        if (e.video_kind == VideoSourceKind::FramesDir && !e.video_record_id.empty())
            throw ValidationError(where + ": '#record' is only valid on .maiv references");
        if (e.video_record_id.empty() && e.video_kind == VideoSourceKind::EmbeddingFile) e.video_record_id = e.clip_id;
        e.label = std::string(trim(f[3]));
        const auto split = trim(f[4]);
        if (split == "train") e.split = fusion::Split::Train;
        else if (split == "test") e.split = fusion::Split::Test;
        else throw ValidationError(where + ": split must be 'train' or 'test', got '" + std::string(split) + "'");

        if (!ids.insert(e.clip_id).second) throw ValidationError(where + ": duplicate clip_id '" + e.clip_id + "'");
        labels.insert(e.label);
        m.entries.push_back(std::move(e));
    }
    if (!header_seen) throw ValidationError("manifest is empty (missing header)");
    m.classes.assign(labels.begin(), labels.end());
    return m;
}

DatasetManifest read_manifest(const fs::path& path) {
    return parse_manifest(read_file_bytes(path.string()), path.parent_path());
}

std::string format_manifest(const DatasetManifest& manifest) {
    std::string out(kHeader);
    out += '\n';
    for (const auto& e : manifest.entries) {
        out += e.clip_id;
        out += ',';
        out += relative_or_absolute(e.audio_path, manifest.base_dir);
        out += ',';
        out += relative_or_absolute(e.video_source, manifest.base_dir);
        if (e.video_kind == VideoSourceKind::EmbeddingFile && e.video_record_id != e.clip_id)
            out += "#" + e.video_record_id;
        out += ',';
        out += e.label;
        out += ',';
        out += to_string(e.split);
        out += '\n';
    }
    return out;
}

void require_both_splits(const DatasetManifest& manifest) {
    if (manifest.count(fusion::Split::Train) == 0) throw ValidationError("manifest has no train clips");
    if (manifest.count(fusion::Split::Test) == 0) throw ValidationError("manifest has no test clips");
}

}  // namespace maivar::pipeline
