#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maivar/embeddings/embedding.hpp"

namespace maivar::embed {

enum class Modality : std::uint8_t { Audio = 0, Video = 1 };

inline constexpr std::uint16_t kEmbeddingFormatVersion = 1;

struct EmbeddingRecord {
    std::string clip_id;
    std::vector<float> values;
};

// Binary layout (little-endian):
//   "MAIV" | u16 version | u8 modality | u32 count | u32 rows | u32 cols
//   per record: u32 id_len | id bytes | u32 value_count | f32[value_count]
// value_count must equal rows * cols.
struct EmbeddingFile {
    Modality modality = Modality::Audio;
    std::uint32_t rows = 1;
    std::uint32_t cols = kAudioEmbeddingDim;
    std::vector<EmbeddingRecord> records;
};

std::string encode_embeddings(const EmbeddingFile& file);
EmbeddingFile decode_embeddings(std::string_view bytes);
void write_embeddings(const EmbeddingFile& file, const std::string& path);
EmbeddingFile read_embeddings(const std::string& path);

// Typed wrappers that enforce 1 x 1536 (audio) and 25 x 1024 (video).
void write_audio_embeddings(std::span<const AudioEmbedding> records, const std::string& path);
void write_video_embeddings(std::span<const VideoEmbedding> records, const std::string& path);
std::vector<AudioEmbedding> to_audio_embeddings(const EmbeddingFile& file);
std::vector<VideoEmbedding> to_video_embeddings(const EmbeddingFile& file);
std::vector<AudioEmbedding> read_audio_embeddings(const std::string& path);
std::vector<VideoEmbedding> read_video_embeddings(const std::string& path);

// CSV rows `clip_id,v0,...,vN` (optional header starting with "clip_id").
// Video rows hold the 25 x 1024 values flattened row-major.
EmbeddingFile parse_embeddings_csv(std::string_view text, Modality modality);
EmbeddingFile import_embeddings_csv(const std::string& path, Modality modality);

}  // namespace maivar::embed
