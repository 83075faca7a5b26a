#include "maivar/image/png_io.hpp"

#include <png.h>

#include <cstring>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"

namespace maivar::image {

namespace {

// Frees libpng's decode state on every exit path.
struct PngImageGuard {
    png_image* image;
    ~PngImageGuard() { png_image_free(image); }
};

}  // namespace

std::string encode_png(const AudioImage& img) {
    validate(img);
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = kImageWidth;
    image.height = kImageHeight;
    image.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    const png_int_32 stride = kImageWidth * kImageChannels;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), stride, nullptr))
        throw IoError(std::string("PNG encode failed: ") + image.message);
    std::string out(size, '\0');
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels.data(), stride, nullptr))
        throw IoError(std::string("PNG encode failed: ") + image.message);
    out.resize(size);
    return out;
}

void write_png(const AudioImage& img, const std::string& path) { write_file_bytes(path, encode_png(img)); }

AudioImage decode_png(std::string_view bytes, std::string clip_id) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    PngImageGuard guard{&image};

    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw MalformedImage("'" + clip_id + "': " + image.message);
    if (image.width != kImageWidth || image.height != kImageHeight) {
        throw DimensionMismatch("'" + clip_id + "': image is " + std::to_string(image.width) + "x" +
                                std::to_string(image.height) + ", expected 224x224");
    }
    image.format = PNG_FORMAT_RGB;

    AudioImage img;
    img.clip_id = std::move(clip_id);
    if (!png_image_finish_read(&image, nullptr, img.pixels.data(), kImageWidth * kImageChannels, nullptr))
        throw MalformedImage("'" + img.clip_id + "': " + image.message);
    return img;
}

AudioImage read_png(const std::string& path, std::string clip_id) {
    return decode_png(read_file_bytes(path), std::move(clip_id));
}

}  // namespace maivar::image
