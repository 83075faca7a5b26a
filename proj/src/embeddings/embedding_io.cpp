#include "maivar/embeddings/embedding_io.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"

namespace maivar::embed {

namespace {

constexpr std::string_view kMagic = "MAIV";

std::string_view modality_name(Modality m) { return m == Modality::Audio ? "audio" : "video"; }

void expect_shape(const EmbeddingFile& file, Modality modality, std::uint32_t rows, std::uint32_t cols) {
    if (file.modality != modality) {
        throw ShapeMismatch("expected a " + std::string(modality_name(modality)) + " embedding file, got " +
                            std::string(modality_name(file.modality)));
    }
    if (file.rows != rows || file.cols != cols) {
        throw ShapeMismatch(std::string(modality_name(modality)) + " embeddings must be " + std::to_string(rows) +
                            "x" + std::to_string(cols) + ", file declares " + std::to_string(file.rows) + "x" +
                            std::to_string(file.cols));
    }
}

void check_records(const EmbeddingFile& file) {
    const std::size_t expected = static_cast<std::size_t>(file.rows) * file.cols;
    std::unordered_set<std::string_view> seen;
    for (const auto& r : file.records) {
        if (r.values.size() != expected) {
            throw ShapeMismatch("record '" + r.clip_id + "' has " + std::to_string(r.values.size()) +
                                " values, header declares " + std::to_string(expected));
        }
        if (!seen.insert(r.clip_id).second) throw DuplicateClipId("duplicate clip id '" + r.clip_id + "'");
    }
}

void check_finite(std::span<const float> values, const std::string& clip_id) {
    for (float v : values) {
        if (!std::isfinite(v)) throw InvalidParameter("embedding '" + clip_id + "' contains NaN or Inf");
    }
}

}  // namespace

void validate(const AudioEmbedding& e) {
    if (e.values.size() != kAudioEmbeddingDim) {
        throw ShapeMismatch("audio embedding '" + e.clip_id + "' has " + std::to_string(e.values.size()) +
                            " values, expected 1536");
    }
    check_finite(e.values, e.clip_id);
}

void validate(const VideoEmbedding& e) {
    if (e.values.size() != kVideoEmbeddingSize) {
        throw ShapeMismatch("video embedding '" + e.clip_id + "' has " + std::to_string(e.values.size()) +
                            " values, expected 25x1024");
    }
    check_finite(e.values, e.clip_id);
}

std::string encode_embeddings(const EmbeddingFile& file) {
    check_records(file);
    ByteWriter w;
    w.put_bytes(kMagic);
    w.put<std::uint16_t>(kEmbeddingFormatVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(file.modality));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(file.records.size()));
    w.put<std::uint32_t>(file.rows);
    w.put<std::uint32_t>(file.cols);
    for (const auto& r : file.records) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(r.clip_id.size()));
        w.put_bytes(r.clip_id);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(r.values.size()));
        for (float v : r.values) w.put<float>(v);
    }
    return w.release();
}

EmbeddingFile decode_embeddings(std::string_view bytes) {
    ByteReader r(bytes);
    if (r.get_bytes(4) != kMagic || !r.ok()) throw BadMagic("not a MAIV embedding file");
    const auto version = r.get<std::uint16_t>();
    if (!r.ok()) throw MalformedEmbeddings("truncated embedding header");
    if (version != kEmbeddingFormatVersion)
        throw VersionMismatch("unsupported embedding file version " + std::to_string(version));

    EmbeddingFile file;
    const auto modality = r.get<std::uint8_t>();
    const auto count = r.get<std::uint32_t>();
    file.rows = r.get<std::uint32_t>();
    file.cols = r.get<std::uint32_t>();
    if (!r.ok()) throw MalformedEmbeddings("truncated embedding header");
    if (modality > 1) throw MalformedEmbeddings("unknown modality tag " + std::to_string(modality));
    file.modality = static_cast<Modality>(modality);

    const std::size_t expected = static_cast<std::size_t>(file.rows) * file.cols;
    std::unordered_set<std::string> seen;
    file.records.reserve(std::min<std::size_t>(count, r.remaining() / 8 + 1));
    for (std::uint32_t i = 0; i < count; ++i) {
        EmbeddingRecord rec;
        const auto id_len = r.get<std::uint32_t>();
        rec.clip_id = std::string(r.get_bytes(id_len));
        const auto n_values = r.get<std::uint32_t>();
        if (!r.ok()) throw MalformedEmbeddings("truncated record " + std::to_string(i));
        if (n_values != expected) {
            throw ShapeMismatch("record '" + rec.clip_id + "' has " + std::to_string(n_values) +
                                " values, header declares " + std::to_string(expected));
        }
        if (r.remaining() / sizeof(float) < n_values) throw MalformedEmbeddings("truncated record '" + rec.clip_id + "'");
        rec.values.resize(n_values);
        for (auto& v : rec.values) v = r.get<float>();
        check_finite(rec.values, rec.clip_id);
        if (!seen.insert(rec.clip_id).second) throw DuplicateClipId("duplicate clip id '" + rec.clip_id + "'");
        file.records.push_back(std::move(rec));
    }
    if (r.remaining() != 0) throw MalformedEmbeddings("trailing bytes after last record");
    return file;
}

void write_embeddings(const EmbeddingFile& file, const std::string& path) {
    write_file_bytes(path, encode_embeddings(file));
}

EmbeddingFile read_embeddings(const std::string& path) { return decode_embeddings(read_file_bytes(path)); }

void write_audio_embeddings(std::span<const AudioEmbedding> records, const std::string& path) {
    EmbeddingFile file{Modality::Audio, 1, kAudioEmbeddingDim, {}};
    file.records.reserve(records.size());
    for (const auto& e : records) {
        validate(e);
        file.records.push_back({e.clip_id, e.values});
    }
    write_embeddings(file, path);
}

void write_video_embeddings(std::span<const VideoEmbedding> records, const std::string& path) {
    EmbeddingFile file{Modality::Video, kVideoSegments, kVideoFeatureDim, {}};
    file.records.reserve(records.size());
    for (const auto& e : records) {
        validate(e);
        file.records.push_back({e.clip_id, e.values});
    }
    write_embeddings(file, path);
}

std::vector<AudioEmbedding> to_audio_embeddings(const EmbeddingFile& file) {
    expect_shape(file, Modality::Audio, 1, kAudioEmbeddingDim);
    check_records(file);
    std::vector<AudioEmbedding> out;
    out.reserve(file.records.size());
    for (const auto& r : file.records) out.push_back({r.clip_id, r.values});
    return out;
}

std::vector<VideoEmbedding> to_video_embeddings(const EmbeddingFile& file) {
    expect_shape(file, Modality::Video, kVideoSegments, kVideoFeatureDim);
    check_records(file);
    std::vector<VideoEmbedding> out;
    out.reserve(file.records.size());
    for (const auto& r : file.records) out.push_back({r.clip_id, r.values});
    return out;
}

std::vector<AudioEmbedding> read_audio_embeddings(const std::string& path) {
    return to_audio_embeddings(read_embeddings(path));
}

std::vector<VideoEmbedding> read_video_embeddings(const std::string& path) {
    return to_video_embeddings(read_embeddings(path));
}

EmbeddingFile parse_embeddings_csv(std::string_view text, Modality modality) {
    EmbeddingFile file;
    file.modality = modality;
    if (modality == Modality::Audio) {
        file.rows = 1;
        file.cols = kAudioEmbeddingDim;
    } else {
        file.rows = kVideoSegments;
        file.cols = kVideoFeatureDim;
    }
    const std::size_t expected = static_cast<std::size_t>(file.rows) * file.cols;

    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        for (std::size_t start = 0;;) {
            const auto comma = line.find(',', start);
            auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
            while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
            fields.push_back(field);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (line_no == 1 && fields[0] == "clip_id") continue;

        EmbeddingRecord rec;
        rec.clip_id = std::string(fields[0]);
        if (fields.size() - 1 != expected) {
            throw ShapeMismatch("CSV line " + std::to_string(line_no) + " ('" + rec.clip_id + "') has " +
                                std::to_string(fields.size() - 1) + " values, expected " + std::to_string(expected));
        }
        rec.values.resize(expected);
        for (std::size_t i = 0; i < expected; ++i) {
            const auto f = fields[i + 1];
            float v = 0.0f;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size())
                throw MalformedEmbeddings("CSV line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
            rec.values[i] = v;
        }
        check_finite(rec.values, rec.clip_id);
        if (!seen.insert(rec.clip_id).second) throw DuplicateClipId("duplicate clip id '" + rec.clip_id + "'");
        file.records.push_back(std::move(rec));
    }
    return file;
}

EmbeddingFile import_embeddings_csv(const std::string& path, Modality modality) {
    return parse_embeddings_csv(read_file_bytes(path), modality);
}

}  // namespace maivar::embed
