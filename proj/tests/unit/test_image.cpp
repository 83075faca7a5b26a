#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "maivar/core/errors.hpp"
#include "maivar/image/png_io.hpp"
#include "maivar/image/render.hpp"
#include "maivar/image/tensor.hpp"
#include "test_signals.hpp"

using namespace maivar;
using namespace maivar::image;
using dsp::FeatureKind;
using dsp::FeatureTrack;

namespace {

FeatureTrack heat_track(std::size_t frames, std::size_t dims, FeatureKind kind = FeatureKind::Mfcc) {
    FeatureTrack t;
    t.kind = kind;
    t.frames = frames;
    t.dims = dims;
    t.values.assign(frames * dims, 0.0);
    return t;
}

}  // namespace

TEST_CASE("viridis has strictly increasing luminance") {
    const auto& lut = viridis().lut;
    for (std::size_t i = 1; i < lut.size(); ++i) CHECK(luminance(lut[i]) > luminance(lut[i - 1]));
    CHECK(lut[0] == Rgb{68, 1, 84});
    CHECK(lut[255] == Rgb{253, 231, 37});
}

TEST_CASE("silent waveplot lights only the zero row") {
    const auto img = render(dsp::waveplot_track(maivar::testing::silent_clip(4096), 224));
    CHECK(amplitude_row(0.0) == 112);
    const Rgb line = viridis().lut[128];
    for (std::size_t y = 0; y < kImageHeight; ++y)
        for (std::size_t x = 0; x < kImageWidth; ++x) CHECK(img.at(y, x) == (y == 112 ? line : kBackground));
}

TEST_CASE("waveplot amplitude axis") {
    CHECK(amplitude_row(1.0) == 0);
    CHECK(amplitude_row(-1.0) == 223);
    const auto img = render(dsp::waveplot_track(maivar::testing::sine_clip(2000.0, 0.5, 22050, 1.0), 224));
    // Each column spans many periods of a full-scale tone.
    for (std::size_t x = 0; x < kImageWidth; ++x) {
        CHECK(img.at(10, x) != kBackground);
        CHECK(img.at(213, x) != kBackground);
    }
}

TEST_CASE("constant heatmap maps to the first colour") {
    auto t = heat_track(10, 20);
    std::fill(t.values.begin(), t.values.end(), -3.5);
    const auto img = render(t);
    for (std::size_t y = 0; y < kImageHeight; ++y)
        for (std::size_t x = 0; x < kImageWidth; ++x) REQUIRE(img.at(y, x) == viridis().lut[0]);
}

TEST_CASE("heatmap min and max reach both ends of the colormap") {
    auto t = heat_track(4, 2, FeatureKind::MfccScaled);
    for (std::size_t f = 0; f < 4; ++f) {
        t.at(f, 0) = -1.0;
        t.at(f, 1) = 5.0;
    }
    const auto img = render(t);
    const auto& lut = viridis().lut;
    // Row 0 shows the highest dim.
    CHECK(img.at(0, 0) == lut[255]);
    CHECK(img.at(223, 223) == lut[0]);
    for (std::size_t y = 0; y < kImageHeight; ++y) {
        const Rgb expected = y < 112 ? lut[255] : lut[0];
        for (std::size_t x = 0; x < kImageWidth; ++x) REQUIRE(img.at(y, x) == expected);
    }
}

TEST_CASE("440 Hz chromagram: the A band is brightest in every column") {
    const auto chroma = dsp::compute_feature(maivar::testing::sine_clip(440.0, 1.0), FeatureKind::Chromagram);
    const auto img = render(chroma);
    // Pitch class 9 occupies rows whose dim index (11 - floor(y * 12 / 224)) is 9.
    for (std::size_t x = 0; x < kImageWidth; ++x) {
        double best = -1.0;
        std::size_t best_y = 0;
        for (std::size_t y = 0; y < kImageHeight; ++y) {
            const double l = luminance(img.at(y, x));
            if (l > best) best = l, best_y = y;
        }
        CHECK(11 - best_y * 12 / 224 == 9);
    }
}

TEST_CASE("centroid and rolloff polylines") {
    auto t = heat_track(224, 1, FeatureKind::SpectralCentroid);
    std::fill(t.values.begin(), t.values.end(), 0.5 * dsp::kTargetSampleRate / 2.0);
    const auto img = render(t);
    const Rgb ink = viridis().lut[255];
    for (std::size_t x = 0; x < kImageWidth; ++x) {
        std::size_t lit = 0;
        for (std::size_t y = 0; y < kImageHeight; ++y) lit += img.at(y, x) == ink;
        CHECK(lit == 2);
        CHECK(img.at(112, x) == ink);
    }

    // Above Nyquist is clamped to the top edge; zero Hz sits on the bottom.
    auto r = heat_track(3, 1, FeatureKind::SpectralRolloff);
    r.values = {0.0, 0.0, 0.0};
    const auto bottom = render(r);
    CHECK(bottom.at(223, 100) == ink);
    CHECK(bottom.at(222, 100) == ink);
    CHECK(bottom.at(0, 100) == kBackground);
}

TEST_CASE("render rejects bad tracks") {
    CHECK_THROWS_AS(render(heat_track(0, 20)), EmptyTrack);
    CHECK_THROWS_AS(render(heat_track(5, 0)), EmptyTrack);
    auto t = heat_track(3, 2);
    t.values.pop_back();
    CHECK_THROWS_AS(render(t), EmptyTrack);
    auto n = heat_track(3, 2);
    n.values[1] = std::nan("");
    CHECK_THROWS_AS(render(n), InvalidParameter);
}

TEST_CASE("render is pure") {
    const auto clip = maivar::testing::noise_clip(12000, 31);
    for (auto kind : dsp::kAllFeatureKinds) {
        const auto track = dsp::compute_feature(clip, kind);
        const auto a = render(track);
        const auto b = render(track);
        CHECK(a.pixels == b.pixels);
        CHECK(a.pixels.size() == kImageBytes);
    }
}

TEST_CASE("horizontal flip equals rendering the time-reversed track") {
    auto t = heat_track(56, 5);
    Rng rng(3);
    for (auto& v : t.values) v = rng.uniform(-1.0, 1.0);
    auto rev = t;
    for (std::size_t f = 0; f < t.frames; ++f)
        for (std::size_t d = 0; d < t.dims; ++d) rev.at(f, d) = t.at(t.frames - 1 - f, d);
    const auto flipped = flip(normalize(render(t)), {true, false});
    const auto expected = normalize(render(rev));
    CHECK(flipped.values == expected.values);
}

TEST_CASE("normalize uses ImageNet statistics") {
    AudioImage img;
    img.set(0, 0, {255, 0, 0});
    const auto t = normalize(img);
    CHECK(t.at(0, 0, 0) == doctest::Approx(2.2489082969432315).epsilon(1e-15));
    CHECK(t.at(2, 0, 0) == doctest::Approx(-1.8044444444444445).epsilon(1e-15));
    CHECK(t.at(1, 0, 0) == doctest::Approx(-0.456 / 0.224).epsilon(1e-15));

    const auto rendered = render(dsp::compute_feature(maivar::testing::noise_clip(5000, 2), FeatureKind::Mfcc));
    CHECK(denormalize(normalize(rendered)).pixels == rendered.pixels);

    AudioImage bad;
    bad.pixels.resize(10);
    CHECK_THROWS_AS(normalize(bad), DimensionMismatch);
}

TEST_CASE("augmentation") {
    const auto base = normalize(render(dsp::compute_feature(maivar::testing::noise_clip(5000, 6), FeatureKind::Chromagram)));

    SUBCASE("zero probabilities are the identity") {
        for (std::uint64_t i = 0; i < 10; ++i) CHECK(augment(base, {0.0, 0.0, 5}, i).values == base.values);
    }
    SUBCASE("forced flips reverse both axes and are an involution") {
        const AugmentPolicy p{1.0, 1.0, 5};
        const auto once = augment(base, p, 0);
        CHECK(once.at(0, 0, 0) == base.at(0, 223, 223));
        CHECK(once.at(2, 10, 20) == base.at(2, 213, 203));
        CHECK(augment(once, p, 1).values == base.values);
    }
    SUBCASE("decision is a pure function of seed and draw index") {
        const AugmentPolicy p{0.5, 0.5, 42};
        const auto a = flip_decision(p, 0);
        const auto b = flip_decision(p, 0);
        CHECK(a.horizontal == b.horizontal);
        CHECK(a.vertical == b.vertical);
        CHECK(augment(base, p, 0).values == augment(base, p, 0).values);

        std::size_t h = 0, v = 0;
        for (std::uint64_t i = 0; i < 2000; ++i) {
            const auto d = flip_decision(p, i);
            h += d.horizontal;
            v += d.vertical;
        }
        CHECK(h > 850);
        CHECK(h < 1150);
        CHECK(v > 850);
        CHECK(v < 1150);
    }
    SUBCASE("bad probabilities") {
        CHECK_THROWS_AS(augment(base, {1.5, 0.0, 0}, 0), InvalidParameter);
        CHECK_THROWS_AS(augment(base, {0.0, -0.1, 0}, 0), InvalidParameter);
    }
}

TEST_CASE("png round trip and errors") {
    const auto img = render(dsp::compute_feature(maivar::testing::noise_clip(7000, 12), FeatureKind::Chromagram));
    const auto bytes = encode_png(img);
    CHECK(bytes.substr(1, 3) == "PNG");
    const auto back = decode_png(bytes, "abc");
    CHECK(back.clip_id == "abc");
    CHECK(back.pixels == img.pixels);

    CHECK_THROWS_AS(decode_png(bytes.substr(0, bytes.size() / 2)), MalformedImage);
    CHECK_THROWS_AS(decode_png("not a png"), MalformedImage);

    // Hand-assembled 100 x 100 grayscale PNG (stored zlib block).
    std::string small;
    {
        auto crc32 = [](std::string_view data) {
            std::uint32_t c = 0xFFFFFFFFu;
            for (unsigned char ch : data) {
                c ^= ch;
                for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xEDB88320u & (0u - (c & 1u)));
            }
            return c ^ 0xFFFFFFFFu;
        };
        auto be32 = [](std::uint32_t v) {
            std::string s(4, '\0');
            for (int i = 0; i < 4; ++i) s[i] = static_cast<char>(v >> (24 - 8 * i));
            return s;
        };
        auto chunk = [&](std::string_view type, std::string_view data) {
            std::string body = std::string(type) + std::string(data);
            return be32(static_cast<std::uint32_t>(data.size())) + body + be32(crc32(body));
        };
        std::string ihdr = be32(100) + be32(100);
        ihdr += std::string("\x08\x00\x00\x00\x00", 5);
        std::string raw;
        for (int y = 0; y < 100; ++y) raw += std::string(101, '\0');  // filter byte + 100 pixels
        std::string z = "\x78\x01";
        const std::uint16_t len = static_cast<std::uint16_t>(raw.size());
        z.push_back('\x01');
        z.push_back(static_cast<char>(len & 0xFF));
        z.push_back(static_cast<char>(len >> 8));
        z.push_back(static_cast<char>(~len & 0xFF));
        z.push_back(static_cast<char>((~len >> 8) & 0xFF));
        z += raw;
        std::uint32_t a = 1, b = 0;
        for (unsigned char ch : raw) {
            a = (a + ch) % 65521;
            b = (b + a) % 65521;
        }
        z += be32((b << 16) | a);
        small = "\x89PNG\r\n\x1a\n" + chunk("IHDR", ihdr) + chunk("IDAT", z) + chunk("IEND", "");
    }
    CHECK_THROWS_AS(decode_png(small), DimensionMismatch);
}

TEST_CASE("image file names") {
    CHECK(image_file_name("v_x_g01", FeatureKind::MfccScaled) == "v_x_g01.mfcc_scaled.png");
    AudioImage img;
    CHECK_NOTHROW(validate(img));
    img.pixels.push_back(0);
    CHECK_THROWS_AS(validate(img), DimensionMismatch);
}
