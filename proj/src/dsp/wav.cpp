#include "maivar/dsp/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"

namespace maivar::dsp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FormatChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

FormatChunk parse_fmt(std::string_view body) {
    ByteReader r(body);
    FormatChunk fmt;
    fmt.format = r.get<std::uint16_t>();
    fmt.channels = r.get<std::uint16_t>();
    fmt.sample_rate = r.get<std::uint32_t>();
    r.get<std::uint32_t>();  // byte rate
    fmt.block_align = r.get<std::uint16_t>();
    fmt.bits = r.get<std::uint16_t>();
    if (!r.ok()) throw MalformedWav("fmt chunk too short");
    if (fmt.format == kFormatExtensible) {
        const auto ext_size = r.get<std::uint16_t>();
        r.get<std::uint16_t>();  // valid bits
        r.get<std::uint32_t>();  // channel mask
        const auto sub = r.get<std::uint16_t>();
        if (!r.ok() || ext_size < 22) throw MalformedWav("truncated WAVE_FORMAT_EXTENSIBLE");
        fmt.format = sub;
    }
    return fmt;
}

double decode_sample(const unsigned char* p, const FormatChunk& fmt) {
    if (fmt.format == kFormatFloat) {
        float f;
        std::memcpy(&f, p, 4);
        return static_cast<double>(f);
    }
    switch (fmt.bits) {
        case 8:
            return (static_cast<int>(p[0]) - 128) / 128.0;
        case 16: {
            const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            return v / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v -= 0x1000000;
            return v / 8388608.0;
        }
        case 32: {
            const auto v = static_cast<std::int32_t>(static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                                     (static_cast<std::uint32_t>(p[2]) << 16) |
                                                     (static_cast<std::uint32_t>(p[3]) << 24));
            return v / 2147483648.0;
        }
        default:
            return 0.0;
    }
}

}  // namespace

void validate(const AudioClip& clip) {
    if (clip.samples.empty()) throw EmptySignal("clip '" + clip.id + "' has no samples");
    if (clip.sample_rate_hz <= 0) throw InvalidParameter("clip '" + clip.id + "' has non-positive sample rate");
    for (double s : clip.samples) {
        if (!std::isfinite(s) || s < -1.0 || s > 1.0)
            throw InvalidParameter("clip '" + clip.id + "' has a sample outside [-1, 1]");
    }
}

AudioClip decode_wav(std::string_view bytes, std::string id) {
    ByteReader r(bytes);
    const auto riff = r.get_bytes(4);
    r.get<std::uint32_t>();
    const auto wave = r.get_bytes(4);
    if (!r.ok() || riff != "RIFF" || wave != "WAVE") throw MalformedWav("'" + id + "': not a RIFF/WAVE file");

    std::optional<FormatChunk> fmt;
    std::string_view data;
    bool have_data = false;
    while (r.remaining() >= 8) {
        const auto tag = r.get_bytes(4);
        const auto size = r.get<std::uint32_t>();
        const std::size_t take = std::min<std::size_t>(size, r.remaining());
        const auto body = r.get_bytes(take);
        if (tag == "fmt ") {
            if (take < size) throw MalformedWav("'" + id + "': truncated fmt chunk");
            fmt = parse_fmt(body);
        } else if (tag == "data") {
            data = body;
            have_data = true;
        }
        if ((size & 1U) && r.remaining() > 0) r.get<std::uint8_t>();
        if (have_data && fmt) break;
    }
    if (!fmt) throw MalformedWav("'" + id + "': missing fmt chunk");
    if (!have_data) throw MalformedWav("'" + id + "': missing data chunk");
    if (fmt->channels == 0 || fmt->sample_rate == 0) throw MalformedWav("'" + id + "': zero channels or rate");

    const bool pcm_ok = fmt->format == kFormatPcm &&
                        (fmt->bits == 8 || fmt->bits == 16 || fmt->bits == 24 || fmt->bits == 32);
    const bool float_ok = fmt->format == kFormatFloat && fmt->bits == 32;
    if (!pcm_ok && !float_ok) throw MalformedWav("'" + id + "': unsupported sample format");

    const std::size_t bytes_per_sample = fmt->bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
    const std::size_t n_frames = data.size() / frame_bytes;
    if (n_frames == 0) throw MalformedWav("'" + id + "': no sample frames");

    AudioClip clip;
    clip.id = std::move(id);
    clip.sample_rate_hz = static_cast<int>(fmt->sample_rate);
    clip.samples.resize(n_frames);
    const auto* base = reinterpret_cast<const unsigned char*>(data.data());
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < fmt->channels; ++c) {
            acc += decode_sample(base + i * frame_bytes + c * bytes_per_sample, *fmt);
        }
        double s = acc / fmt->channels;
        if (!std::isfinite(s)) s = 0.0;
        clip.samples[i] = std::clamp(s, -1.0, 1.0);
    }
    return clip;
}

AudioClip read_wav(const std::string& path, std::string id) {
    return decode_wav(read_file_bytes(path), std::move(id));
}

AudioClip resample_linear(const AudioClip& clip, int target_rate_hz) {
    if (target_rate_hz <= 0) throw InvalidParameter("target sample rate must be positive");
    validate(clip);
    if (clip.sample_rate_hz == target_rate_hz) return clip;

    const std::size_t n_in = clip.samples.size();
    const double ratio = static_cast<double>(clip.sample_rate_hz) / target_rate_hz;
    const auto n_out = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(n_in) / ratio)));

    AudioClip out;
    out.id = clip.id;
    out.sample_rate_hz = target_rate_hz;
    out.samples.resize(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double pos = i * ratio;
        const auto left = static_cast<std::size_t>(pos);
        if (left + 1 >= n_in) {
            out.samples[i] = clip.samples[n_in - 1];
            continue;
        }
        const double frac = pos - static_cast<double>(left);
        out.samples[i] = clip.samples[left] + frac * (clip.samples[left + 1] - clip.samples[left]);
    }
    return out;
}

AudioClip load_clip(const std::string& path, std::string id) {
    return resample_linear(read_wav(path, std::move(id)), kTargetSampleRate);
}

std::string encode_wav_pcm16(const AudioClip& clip) {
    const auto n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_bytes = n * 2;
    ByteWriter w;
    w.put_bytes("RIFF");
    w.put<std::uint32_t>(36 + data_bytes);
    w.put_bytes("WAVE");
    w.put_bytes("fmt ");
    w.put<std::uint32_t>(16);
    w.put<std::uint16_t>(kFormatPcm);
    w.put<std::uint16_t>(1);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(clip.sample_rate_hz));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
    w.put<std::uint16_t>(2);
    w.put<std::uint16_t>(16);
    w.put_bytes("data");
    w.put<std::uint32_t>(data_bytes);
    for (double s : clip.samples) {
        const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
        w.put<std::int16_t>(static_cast<std::int16_t>(scaled));
    }
    return w.release();
}

void write_wav_pcm16(const std::string& path, const AudioClip& clip) {
    write_file_bytes(path, encode_wav_pcm16(clip));
}

}  // namespace maivar::dsp
