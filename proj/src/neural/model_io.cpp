#include "maivar/neural/model_io.hpp"

#include <algorithm>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"

namespace maivar::nn {

namespace {

constexpr std::string_view kMagic = "MLPM";
constexpr std::uint32_t kMaxDims = 64;

}  // namespace

std::string encode_model(const MlpModel& model) {
    validate(model);
    ByteWriter w;
    w.put_bytes(kMagic);
    w.put<std::uint32_t>(kModelFormatVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(model.layer_dims.size()));
    for (auto d : model.layer_dims) w.put<std::uint64_t>(d);
    for (const auto& layer : model.layers) {
        for (double v : layer.weights) w.put<double>(v);
        for (double v : layer.biases) w.put<double>(v);
    }
    return w.release();
}

MlpModel decode_model(std::string_view bytes, std::optional<std::span<const std::size_t>> expected_dims) {
    ByteReader r(bytes);
    if (r.get_bytes(4) != kMagic || !r.ok()) throw MalformedModel("not an MLPM model file");
    const auto version = r.get<std::uint32_t>();
    if (!r.ok()) throw MalformedModel("truncated model header");
    if (version != kModelFormatVersion) throw VersionMismatch("unsupported model version " + std::to_string(version));
    const auto n_dims = r.get<std::uint32_t>();
    if (!r.ok() || n_dims < 2 || n_dims > kMaxDims) throw MalformedModel("invalid layer count in model header");

    std::vector<std::size_t> dims(n_dims);
    for (auto& d : dims) d = static_cast<std::size_t>(r.get<std::uint64_t>());
    if (!r.ok()) throw MalformedModel("truncated model header");
    if (expected_dims && !std::ranges::equal(dims, *expected_dims)) throw ShapeError("model dims differ from expected");

    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        if (dims[l] == 0 || dims[l + 1] == 0) throw MalformedModel("zero layer dim");
        total += dims[l] * dims[l + 1] + dims[l + 1];
    }
    if (r.remaining() != total * sizeof(double)) throw MalformedModel("model payload size does not match dims");

    MlpModel model = make_model(dims);
    for (auto& layer : model.layers) {
        for (auto& v : layer.weights) v = r.get<double>();
        for (auto& v : layer.biases) v = r.get<double>();
    }
    validate(model);
    return model;
}

void save_model(const MlpModel& model, const std::string& path) { write_file_bytes(path, encode_model(model)); }

MlpModel load_model(const std::string& path, std::optional<std::span<const std::size_t>> expected_dims) {
    return decode_model(read_file_bytes(path), expected_dims);
}

}  // namespace maivar::nn
