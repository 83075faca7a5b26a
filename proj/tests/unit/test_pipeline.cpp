#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/dsp/wav.hpp"
#include "maivar/embeddings/embedding_io.hpp"
#include "maivar/image/png_io.hpp"
#include "maivar/image/render.hpp"
#include "maivar/neural/model_io.hpp"
#include "maivar/pipeline/commands.hpp"
#include "maivar/pipeline/report.hpp"
#include "maivar/pipeline/selftest.hpp"
#include "maivar/pipeline/synth.hpp"
#include "maivar/pipeline/worker_pool.hpp"

namespace fs = std::filesystem;
using namespace maivar;
using namespace maivar::pipeline;

namespace {

fs::path scratch(const std::string& name) {
    const char* env = std::getenv("MAIVAR_TEST_TMP");
    const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "maivar_pipeline_tests";
    const auto dir = root / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Small synthetic dataset shared by several cases; built once.
const fs::path& tiny_dataset() {
    static const fs::path dir = [] {
        auto d = scratch("tiny");
        SynthOptions o;
        o.out_dir = d;
        o.classes = 4;
        o.clips_per_class = 5;
        o.frames_per_clip = 2;
        o.seconds = 0.25;
        o.seed = 3;
        cmd_synth(o);
        return d;
    }();
    return dir;
}

RunConfig quick_config(std::size_t epochs) {
    auto cfg = default_run_config(5);
    cfg.train.hidden = {16};
    cfg.train.audio.epochs = cfg.train.video.epochs = cfg.train.fusion.epochs = epochs;
    return cfg;
}

}  // namespace

TEST_CASE("manifest parsing") {
    const std::string text =
        "clip_id,audio_path,video_source,label,split\n"
        "a,wav/a.wav,frames/a,run,train\n"
        "# comment\n"
        "b,/abs/b.wav,emb/video.maiv#other,jump,test\n"
        "c,wav/c.wav,emb/video.maiv,jump,train\r\n";
    const auto m = parse_manifest(text, "/data");
    REQUIRE(m.entries.size() == 3);
    CHECK(m.entries[0].audio_path == fs::path("/data/wav/a.wav"));
    CHECK(m.entries[0].video_kind == VideoSourceKind::FramesDir);
    CHECK(m.entries[1].audio_path == fs::path("/abs/b.wav"));
    CHECK(m.entries[1].video_kind == VideoSourceKind::EmbeddingFile);
    CHECK(m.entries[1].video_record_id == "other");
    CHECK(m.entries[2].video_record_id == "c");
    CHECK(m.entries[1].split == fusion::Split::Test);
    CHECK(m.classes == std::vector<std::string>{"jump", "run"});
    CHECK(m.label_index("run") == 1);
    CHECK(m.label_index("swim") == -1);
    CHECK(m.count(fusion::Split::Train) == 2);

    const auto again = parse_manifest(format_manifest(m), "/data");
    CHECK(again.entries[1].video_record_id == "other");
    CHECK(again.entries[0].audio_path == m.entries[0].audio_path);

    const std::string header = "clip_id,audio_path,video_source,label,split\n";
    CHECK_THROWS_AS(parse_manifest("id,path\n", "."), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header + "a,x.wav,f,l,val\n", "."), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header + "a,x.wav,f,l\n", "."), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header + "a,x.wav,f,l,train\na,y.wav,g,l,test\n", "."), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header + "a,,f,l,train\n", "."), ValidationError);
    CHECK_THROWS_AS(require_both_splits(parse_manifest(header + "a,x.wav,f,l,train\n", ".")), ValidationError);
}

TEST_CASE("run config") {
    SUBCASE("seed derives the other seeds") {
        const auto c = parse_run_config("seed = 10\n");
        CHECK(c.extractor_seed == 10);
        CHECK(c.train.audio.seed == 11);
        CHECK(c.train.video.seed == 12);
        CHECK(c.train.fusion.seed == 13);
    }
    SUBCASE("explicit keys win regardless of order") {
        const auto c = parse_run_config("video.seed = 99\nseed = 10\nkind = mfcc\nhidden = 64, 32\nfusion.learning_rate = 2e-4\n");
        CHECK(c.train.video.seed == 99);
        CHECK(c.train.audio.seed == 11);
        CHECK(c.kind == dsp::FeatureKind::Mfcc);
        CHECK(c.train.hidden == std::vector<std::size_t>{64, 32});
        CHECK(c.train.fusion.learning_rate == 2e-4);
        const auto o = parse_run_config("video.seed = 99\nseed = 10\n", 50);
        CHECK(o.train.audio.seed == 51);
        CHECK(o.train.video.seed == 99);
    }
    SUBCASE("defaults") {
        const auto c = default_run_config();
        CHECK(c.train.audio.learning_rate == 3e-4);
        CHECK(c.train.video.learning_rate == 3e-4);
        CHECK(c.train.fusion.learning_rate == 1e-4);
        CHECK(c.train.audio.batch_size == 16);
        CHECK(c.train.fusion.batch_size == 128);
    }
    SUBCASE("round trip") {
        auto c = parse_run_config("seed = 4\nhidden =\ntransfer = false\nreduction = flatten\naudio.l1 = 1e-5\n");
        CHECK(c.train.hidden.empty());
        const auto again = parse_run_config(format_run_config(c));
        CHECK(format_run_config(again) == format_run_config(c));
        CHECK_FALSE(again.train.transfer);
        CHECK(again.train.reduction == fusion::VideoReduction::Flatten);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_run_config("colour = red\n"), ValidationError);
        CHECK_THROWS_AS(parse_run_config("audio.epochs = many\n"), ValidationError);
        CHECK_THROWS_AS(parse_run_config("kind = spectrogram\n"), ValidationError);
        CHECK_THROWS_AS(parse_run_config("just words\n"), ValidationError);
        CHECK_THROWS_AS(parse_run_config("audio.batch_size = 0\n"), ValidationError);
    }
}

TEST_CASE("parallel_for") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

    try {
        parallel_for(50, 3, [](std::size_t i) {
            if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "7");
    }
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("synthetic dataset") {
    CHECK(audio_token(0, 4) == 0);
    CHECK(audio_token(1, 4) == 1);
    CHECK(audio_token(2, 4) == 2);
    CHECK(audio_token(3, 4) == 2);
    CHECK(video_token(0, 4) == 0);
    CHECK(video_token(1, 4) == 0);
    CHECK(video_token(2, 4) == 1);
    CHECK(video_token(3, 4) == 2);
    CHECK(token_fundamental_hz(0) == 220.0);

    SUBCASE("counts for 4 classes of 50") {
        SynthOptions o;
        o.out_dir = scratch("synth_counts");
        o.frames_per_clip = 1;
        o.seconds = 0.1;
        const auto r = cmd_synth(o);
        CHECK(r.clips == 200);
        CHECK(r.train == 160);
        CHECK(r.test == 40);
        std::size_t wavs = 0;
        for (const auto& e : fs::directory_iterator(o.out_dir / "audio")) wavs += e.path().extension() == ".wav";
        CHECK(wavs == 200);
        const auto m = read_manifest(r.manifest);
        CHECK(m.classes.size() == 4);
        CHECK(m.entries.size() == 200);
    }
    SUBCASE("fixed seed is byte-identical") {
        const auto& a = tiny_dataset();
        SynthOptions o;
        o.out_dir = scratch("tiny_again");
        o.classes = 4;
        o.clips_per_class = 5;
        o.frames_per_clip = 2;
        o.seconds = 0.25;
        o.seed = 3;
        o.jobs = 3;
        cmd_synth(o);
        for (const auto& rel : {"manifest.csv", "run.cfg", "audio/c02_003.wav", "frames/c03_001/frame_01.png"})
            CHECK(read_file_bytes((a / rel).string()) == read_file_bytes((o.out_dir / rel).string()));
    }
    SUBCASE("class 0 is an A") {
        const auto clip = dsp::load_clip((tiny_dataset() / "audio" / "c00_000.wav").string(), "c00_000");
        const auto chroma = dsp::compute_feature(clip, dsp::FeatureKind::Chromagram);
        const auto inner = dsp::interior_frames(clip.samples.size());
        REQUIRE(!inner.empty());
        for (std::size_t t = inner.first; t < inner.last; ++t) {
            std::size_t arg = 0;
            for (std::size_t d = 1; d < 12; ++d)
                if (chroma.at(t, d) > chroma.at(t, arg)) arg = d;
            CHECK(arg == 9);
        }
    }
}

TEST_CASE("repr") {
    const auto m = read_manifest(tiny_dataset() / "manifest.csv");
    DatasetManifest two = m;
    two.entries.resize(2);
    const auto out = scratch("repr");
    const auto r = cmd_repr(two, {dsp::FeatureKind::Chromagram, out, 2});
    CHECK(r.written == 2);
    CHECK(r.failures.empty());
    std::size_t pngs = 0;
    for (const auto& e : fs::directory_iterator(out)) {
        ++pngs;
        CHECK(image::read_png(e.path().string()).pixels.size() == image::kImageBytes);
    }
    CHECK(pngs == 2);

    const auto first = read_file_bytes((out / "c00_000.chromagram.png").string());
    cmd_repr(two, {dsp::FeatureKind::Chromagram, out, 1});
    CHECK(read_file_bytes((out / "c00_000.chromagram.png").string()) == first);

    SUBCASE("silent clip waveplot") {
        const auto dir = scratch("repr_silent");
        dsp::AudioClip silent{"quiet", std::vector<double>(5000, 0.0), 22050};
        dsp::write_wav_pcm16((dir / "quiet.wav").string(), silent);
        DatasetManifest q;
        q.entries.push_back({"quiet", dir / "quiet.wav", dir, VideoSourceKind::FramesDir, "", "x", fusion::Split::Train});
        CHECK(cmd_repr(q, {dsp::FeatureKind::Waveplot, dir, 1}).written == 1);
        const auto img = image::read_png((dir / "quiet.waveplot.png").string());
        for (std::size_t y = 0; y < image::kImageHeight; ++y)
            for (std::size_t x = 0; x < image::kImageWidth; ++x)
                REQUIRE(img.at(y, x) == (y == 112 ? image::viridis().lut[128] : image::kBackground));
    }
    SUBCASE("bad wav is recorded, others still written") {
        const auto dir = scratch("repr_bad");
        write_file_bytes((dir / "broken.wav").string(), "RIFF0000WAVEjunk");
        DatasetManifest b = two;
        b.entries.push_back({"broken", dir / "broken.wav", dir, VideoSourceKind::FramesDir, "", "x", fusion::Split::Train});
        const auto rb = cmd_repr(b, {dsp::FeatureKind::Mfcc, dir, 1});
        CHECK(rb.written == 2);
        REQUIRE(rb.failures.size() == 1);
        CHECK(rb.failures[0].clip_id == "broken");
    }
}

TEST_CASE("extract") {
    const auto m = read_manifest(tiny_dataset() / "manifest.csv");
    DatasetManifest three = m;
    three.entries.resize(3);
    const auto out = scratch("extract");
    const auto r = cmd_extract(three, {dsp::FeatureKind::Chromagram, 1, {}, out, 2});
    CHECK(r.audio_records == 3);
    const auto file = embed::read_embeddings(r.audio_file.string());
    CHECK(file.records.size() == 3);
    CHECK(file.cols == 1536);
    CHECK(embed::read_embeddings(r.video_file.string()).rows == 25);

    SUBCASE("images from repr give the same embeddings") {
        const auto img_dir = scratch("extract_images");
        cmd_repr(three, {dsp::FeatureKind::Chromagram, img_dir, 1});
        const auto from_png = scratch("extract_png");
        const auto r2 = cmd_extract(three, {dsp::FeatureKind::Chromagram, 1, img_dir, from_png, 1});
        CHECK(read_file_bytes(r2.audio_file.string()) == read_file_bytes(r.audio_file.string()));
    }
    SUBCASE("seed change alters audio embeddings") {
        const auto other = scratch("extract_seed");
        const auto r2 = cmd_extract(three, {dsp::FeatureKind::Chromagram, 2, {}, other, 1});
        const auto a = embed::read_audio_embeddings(r.audio_file.string());
        const auto b = embed::read_audio_embeddings(r2.audio_file.string());
        CHECK(a[0].values != b[0].values);
    }
    SUBCASE("precomputed video embeddings pass through") {
        const auto dir = scratch("extract_ref");
        embed::VideoEmbedding v;
        v.clip_id = "precomputed";
        for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = 0.5f + static_cast<float>(i % 11);
        embed::write_video_embeddings(std::vector{v}, (dir / "ref.maiv").string());
        DatasetManifest one = three;
        one.entries.resize(1);
        one.entries[0].video_kind = VideoSourceKind::EmbeddingFile;
        one.entries[0].video_source = dir / "ref.maiv";
        one.entries[0].video_record_id = "precomputed";
        const auto r2 = cmd_extract(one, {dsp::FeatureKind::Chromagram, 1, {}, dir, 1});
        CHECK(r2.video_passthrough == 1);
        const auto back = embed::read_video_embeddings(r2.video_file.string());
        CHECK(back[0].values == v.values);
        CHECK(back[0].clip_id == one.entries[0].clip_id);

        one.entries[0].video_record_id = "absent";
        CHECK_THROWS_AS(cmd_extract(one, {dsp::FeatureKind::Chromagram, 1, {}, dir, 1}), MissingInput);

        // A reference file of the wrong shape is a typed error.
        embed::EmbeddingFile bad;
        bad.modality = embed::Modality::Video;
        bad.rows = 24;
        bad.cols = 1024;
        bad.records.push_back({"precomputed", std::vector<float>(24 * 1024, 0.0f)});
        embed::write_embeddings(bad, (dir / "ref.maiv").string());
        one.entries[0].video_record_id = "precomputed";
        CHECK_THROWS_AS(cmd_extract(one, {dsp::FeatureKind::Chromagram, 1, {}, dir, 1}), ShapeMismatch);
    }
    SUBCASE("missing inputs") {
        DatasetManifest one = three;
        one.entries.resize(1);
        one.entries[0].video_source = tiny_dataset() / "frames" / "nope";
        try {
            cmd_extract(one, {dsp::FeatureKind::Chromagram, 1, {}, scratch("extract_missing"), 1});
            FAIL("expected MissingInput");
        } catch (const MissingInput& e) {
            CHECK(e.clip_id() == "c00_000");
        }
        CHECK_THROWS_AS(cmd_extract(three, {dsp::FeatureKind::Mfcc, 1, scratch("empty_images"), scratch("x"), 1}),
                        MissingInput);
    }
}

TEST_CASE("train, eval and report") {
    const auto m = read_manifest(tiny_dataset() / "manifest.csv");
    const auto emb = scratch("train_emb");
    cmd_extract(m, {dsp::FeatureKind::Chromagram, 1, {}, emb, 1});

    SUBCASE("zero epochs keeps the initialization") {
        const auto out = scratch("train_zero");
        const auto cfg = quick_config(0);
        const auto res = cmd_train(m, {cfg, emb, out});
        CHECK(res.report.transfer_identity_exact);
        CHECK(res.report.transfer_identity_checked == 4);
        const auto audio = nn::load_model((out / kAudioModelFile).string());
        CHECK(audio == nn::init_model(std::vector<std::size_t>{1536, 16, 4}, fusion::init_seed(cfg.train.audio)));
        const auto j = nlohmann::json::parse(read_file_bytes((out / kReportFile).string()));
        CHECK(j["transfer"]["identity_exact"] == true);
        CHECK(j["representation"] == "chromagram");
    }
    SUBCASE("rerun is byte-identical and eval agrees with the report") {
        const auto a = scratch("train_a"), b = scratch("train_b");
        const auto cfg = quick_config(3);
        cmd_train(m, {cfg, emb, a});
        cmd_train(m, {cfg, emb, b});
        for (const char* f : {kReportFile, kAudioModelFile, kVideoModelFile, kFusionModelFile, kCurvesFile})
            CHECK(read_file_bytes((a / f).string()) == read_file_bytes((b / f).string()));

        const auto j = nlohmann::json::parse(read_file_bytes((a / kReportFile).string()));
        for (const char* k : {"audio", "video", "fusion"}) {
            const double v = j["accuracy"][k];
            CHECK((v >= 0.0 && v <= 1.0));
        }
        const auto ev = cmd_eval(m, a, emb);
        CHECK(ev.n_test == 4);
        CHECK(ev.audio_accuracy == j["accuracy"]["audio"].get<double>());
        CHECK(ev.video_accuracy == j["accuracy"]["video"].get<double>());
        CHECK(ev.fusion_accuracy == j["accuracy"]["fusion"].get<double>());

        const auto curves = read_file_bytes((a / kCurvesFile).string());
        CHECK(curves.rfind("model,epoch,loss,accuracy,test_accuracy\n", 0) == 0);
        CHECK(std::count(curves.begin(), curves.end(), '\n') == 1 + 9);
    }
    SUBCASE("missing modality fails before training") {
        auto broken = m;
        broken.entries.push_back(broken.entries.front());
        broken.entries.back().clip_id = "ghost";
        const auto out = scratch("train_missing");
        try {
            cmd_train(broken, {quick_config(1), emb, out});
            FAIL("expected MissingModality");
        } catch (const MissingModality& e) {
            CHECK(e.clip_id() == "ghost");
        }
        CHECK_FALSE(fs::exists(out / kReportFile));
    }
    SUBCASE("report over two runs") {
        const auto chroma = scratch("report_chroma");
        cmd_train(m, {quick_config(1), emb, chroma});
        const auto wave_emb = scratch("report_wave");
        cmd_extract(m, {dsp::FeatureKind::Waveplot, 1, {}, wave_emb, 1});
        cmd_train(m, {quick_config(1), wave_emb, wave_emb});

        const auto table = load_comparison({chroma, wave_emb});
        REQUIRE(table.rows.size() == 2);
        CHECK(table.rows[0].kind == dsp::FeatureKind::Waveplot);
        CHECK(table.rows[1].kind == dsp::FeatureKind::Chromagram);
        const auto md = render_markdown(table);
        CHECK(md.rfind("| Representation | Audio | Fusion |", 0) == 0);
        CHECK(md.find("**") != std::string::npos);
        CHECK(md.find("Video-only accuracy") != std::string::npos);
        CHECK(md.find("Best audio-only representation:") != std::string::npos);
        CHECK(md.find("Best fusion representation:") != std::string::npos);
        const auto csv = render_csv(table);
        CHECK(csv.find("Chromagram,") != std::string::npos);

        const auto j = nlohmann::json::parse(read_file_bytes((chroma / kReportFile).string()));
        CHECK(csv.find("Chromagram," + j["accuracy"]["audio"].dump() + ",") != std::string::npos);

        try {
            load_comparison({chroma, scratch("report_empty")});
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("report_empty") != std::string::npos);
        }
    }
}

TEST_CASE("selftest") {
    const auto clean = run_selftest();
    CHECK(clean.size() == selftest_check_names().size());
    for (const auto& c : clean) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);

    for (const auto& name : selftest_check_names()) {
        const auto faulty = run_selftest(name);
        for (const auto& c : faulty) CHECK(c.passed == (c.name != name));
    }
    CHECK_THROWS_AS(run_selftest(std::string("nonsense")), ValidationError);
}
