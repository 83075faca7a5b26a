#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>

namespace maivar {

// Little-endian byte buffer helpers shared by the binary file formats.

class ByteWriter {
public:
    template <typename T>
        requires std::is_arithmetic_v<T>
    void put(T value) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        }
        buffer_.append(reinterpret_cast<const char*>(bytes), sizeof(T));
    }

    void put_bytes(std::string_view bytes) { buffer_.append(bytes); }

    const std::string& bytes() const noexcept { return buffer_; }
    std::string release() noexcept { return std::move(buffer_); }

private:
    std::string buffer_;
};

// Reader over an in-memory buffer. `ok()` turns false on the first
// out-of-range read; subsequent reads return zero values.
class ByteReader {
public:
    explicit ByteReader(std::string_view data) noexcept : data_(data) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    T get() noexcept {
        T value{};
        if (!ok_ || data_.size() - pos_ < sizeof(T)) {
            ok_ = false;
            return value;
        }
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, data_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        }
        std::memcpy(&value, bytes, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::string_view get_bytes(std::size_t n) noexcept {
        if (!ok_ || data_.size() - pos_ < n) {
            ok_ = false;
            return {};
        }
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    bool ok() const noexcept { return ok_; }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }

private:
    std::string_view data_;
    std::size_t pos_ = 0;
    bool ok_ = true;
};

// Whole-file helpers; throw maivar::IoError.
std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::string_view bytes);

}  // namespace maivar
