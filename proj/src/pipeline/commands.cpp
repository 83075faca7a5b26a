#include "maivar/pipeline/commands.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "json.hpp"
#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/dsp/wav.hpp"
#include "maivar/embeddings/embedding_io.hpp"
#include "maivar/embeddings/extractor.hpp"
#include "maivar/image/png_io.hpp"
#include "maivar/image/render.hpp"
#include "maivar/neural/model_io.hpp"
#include "maivar/neural/train.hpp"
#include "maivar/pipeline/report.hpp"
#include "maivar/pipeline/worker_pool.hpp"

namespace maivar::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

// Precomputed video embedding files referenced by the manifest, loaded once.
class VideoRefCache {
public:
    const embed::VideoEmbedding* find(const fs::path& file, const std::string& record) {
        std::lock_guard lock(mu_);
        auto it = files_.find(file.string());
        if (it == files_.end()) {
            std::unordered_map<std::string, embed::VideoEmbedding> by_id;
            for (auto& e : embed::read_video_embeddings(file.string())) by_id.emplace(e.clip_id, std::move(e));
            it = files_.emplace(file.string(), std::move(by_id)).first;
        }
        const auto rec = it->second.find(record);
        return rec == it->second.end() ? nullptr : &rec->second;
    }

private:
    std::mutex mu_;
    std::map<std::string, std::unordered_map<std::string, embed::VideoEmbedding>> files_;
};

fs::path out_or_cwd(const fs::path& p) { return p.empty() ? fs::path(".") : p; }

}  // namespace

image::AudioImage render_clip(const fs::path& wav, const std::string& clip_id, dsp::FeatureKind kind) {
    const auto clip = dsp::load_clip(wav.string(), clip_id);
    auto img = image::render(dsp::compute_feature(clip, kind));
    img.clip_id = clip_id;
    return img;
}

ReprResult cmd_repr(const DatasetManifest& manifest, const ReprOptions& opts) {
    const auto out = out_or_cwd(opts.out_dir);
    ensure_dir(out);
    const std::size_t n = manifest.entries.size();
    std::vector<std::optional<std::string>> errors(n);
    parallel_for(n, opts.jobs, [&](std::size_t i) {
        const auto& e = manifest.entries[i];
        try {
            const auto img = render_clip(e.audio_path, e.clip_id, opts.kind);
            image::write_png(img, (out / image::image_file_name(e.clip_id, opts.kind)).string());
        } catch (const Error& err) {
            errors[i] = err.what();
        }
    });
    ReprResult r;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) r.failures.push_back({manifest.entries[i].clip_id, *errors[i]});
        else ++r.written;
    }
    return r;
}

std::vector<image::NormalizedTensor> load_frames(const fs::path& dir, const std::string& clip_id) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw MissingInput(clip_id, "video frames directory '" + dir.string() + "' not found");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
    if (files.empty()) throw MissingInput(clip_id, "no PNG frames in '" + dir.string() + "'");
    std::sort(files.begin(), files.end());
    std::vector<image::NormalizedTensor> frames;
    frames.reserve(files.size());
    for (const auto& f : files) frames.push_back(image::normalize(image::read_png(f.string(), clip_id)));
    return frames;
}

ExtractResult cmd_extract(const DatasetManifest& manifest, const ExtractOptions& opts) {
    const auto out = out_or_cwd(opts.out_dir);
    ensure_dir(out);
    const embed::ToyExtractor extractor({.seed = opts.seed});
    const std::size_t n = manifest.entries.size();
    std::vector<embed::AudioEmbedding> audio(n);
    std::vector<embed::VideoEmbedding> video(n);
    std::vector<char> passthrough(n, 0);
    VideoRefCache refs;

    parallel_for(n, opts.jobs, [&](std::size_t i) {
        const auto& e = manifest.entries[i];

        image::AudioImage img;
        if (opts.images_dir.empty()) {
            img = render_clip(e.audio_path, e.clip_id, opts.kind);
        } else {
            const auto path = opts.images_dir / image::image_file_name(e.clip_id, opts.kind);
            std::error_code ec;
            if (!fs::is_regular_file(path, ec)) throw MissingInput(e.clip_id, "audio image '" + path.string() + "' not found");
            img = image::read_png(path.string(), e.clip_id);
        }
        audio[i] = extractor.extract_audio(image::normalize(img), e.clip_id);

        if (e.video_kind == VideoSourceKind::EmbeddingFile) {
            std::error_code ec;
            if (!fs::is_regular_file(e.video_source, ec))
                throw MissingInput(e.clip_id, "video embedding file '" + e.video_source.string() + "' not found");
            const auto* rec = refs.find(e.video_source, e.video_record_id);
            if (!rec) throw MissingInput(e.clip_id, "record '" + e.video_record_id + "' not in '" + e.video_source.string() + "'");
            video[i].values = rec->values;
            passthrough[i] = 1;
        } else {
            video[i] = extractor.extract_video(load_frames(e.video_source, e.clip_id));
        }
        video[i].clip_id = e.clip_id;
    });

    ExtractResult r;
    r.audio_file = out / kAudioEmbeddingsFile;
    r.video_file = out / kVideoEmbeddingsFile;
    embed::write_audio_embeddings(audio, r.audio_file.string());
    embed::write_video_embeddings(video, r.video_file.string());
    r.audio_records = audio.size();
    r.video_records = video.size();
    r.video_passthrough = static_cast<std::size_t>(std::count(passthrough.begin(), passthrough.end(), 1));

    json info;
    info["kind"] = std::string(dsp::to_string(opts.kind));
    info["extractor_seed"] = opts.seed;
    info["audio_records"] = r.audio_records;
    info["video_records"] = r.video_records;
    info["video_passthrough"] = r.video_passthrough;
    write_file_bytes((out / kEmbeddingsInfoFile).string(), info.dump(2) + "\n");
    return r;
}

std::vector<fusion::ClipSample> assemble_samples(const DatasetManifest& manifest,
                                                 const std::vector<embed::AudioEmbedding>& audio,
                                                 const std::vector<embed::VideoEmbedding>& video) {
    std::unordered_map<std::string_view, const embed::AudioEmbedding*> a;
    std::unordered_map<std::string_view, const embed::VideoEmbedding*> v;
    for (const auto& e : audio) a.emplace(e.clip_id, &e);
    for (const auto& e : video) v.emplace(e.clip_id, &e);

    std::vector<fusion::ClipSample> samples;
    samples.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) {
        const auto ai = a.find(e.clip_id);
        const auto vi = v.find(e.clip_id);
        if (ai == a.end() || vi == v.end()) throw MissingModality(e.clip_id);
        fusion::ClipSample s;
        s.clip_id = e.clip_id;
        s.label = manifest.label_index(e.label);
        s.split = e.split;
        s.audio = *ai->second;
        s.video = *vi->second;
        samples.push_back(std::move(s));
    }
    return samples;
}

fusion::RunResult cmd_train(const DatasetManifest& manifest, const TrainOptions& opts) {
    validate(opts.config);
    require_both_splits(manifest);
    if (manifest.classes.size() < 2) throw ValidationError("manifest needs at least two classes");

    const auto emb_dir = out_or_cwd(opts.embeddings_dir);
    const auto out = out_or_cwd(opts.out_dir);
    const auto audio = embed::read_audio_embeddings((emb_dir / kAudioEmbeddingsFile).string());
    const auto video = embed::read_video_embeddings((emb_dir / kVideoEmbeddingsFile).string());

    RunConfig cfg = opts.config;
    // The representation (and extractor seed) are properties of the
    // embeddings; take them from extract's sidecar when available.
    const auto info_path = emb_dir / kEmbeddingsInfoFile;
    if (std::error_code ec; fs::is_regular_file(info_path, ec)) {
        const auto info = json::parse(read_file_bytes(info_path.string()), nullptr, false);
        if (!info.is_discarded()) {
            if (const auto kind = dsp::parse_feature_kind(info.value("kind", std::string{}))) cfg.kind = *kind;
            cfg.extractor_seed = info.value("extractor_seed", cfg.extractor_seed);
        }
    }

    const auto samples = assemble_samples(manifest, audio, video);
    auto result = fusion::run_maivar(samples, manifest.classes.size(), cfg.train);

    ensure_dir(out);
    nn::save_model(result.audio_model, (out / kAudioModelFile).string());
    nn::save_model(result.video_model, (out / kVideoModelFile).string());
    nn::save_model(result.fusion_model, (out / kFusionModelFile).string());
    write_file_bytes((out / kReportFile).string(), report_json(result.report, cfg, manifest));
    write_file_bytes((out / kCurvesFile).string(), curves_csv(result.report));
    write_file_bytes((out / kConfigFile).string(), format_run_config(cfg));
    return result;
}

EvalResult cmd_eval(const DatasetManifest& manifest, const fs::path& run_dir, const fs::path& embeddings_dir) {
    const auto cfg = load_run_config(run_dir / kConfigFile);
    const auto emb_dir = embeddings_dir.empty() ? run_dir : embeddings_dir;
    const auto audio = embed::read_audio_embeddings((emb_dir / kAudioEmbeddingsFile).string());
    const auto video = embed::read_video_embeddings((emb_dir / kVideoEmbeddingsFile).string());
    const auto samples = assemble_samples(manifest, audio, video);

    const auto audio_model = nn::load_model((run_dir / kAudioModelFile).string());
    const auto video_model = nn::load_model((run_dir / kVideoModelFile).string());
    const auto fusion_model = nn::load_model((run_dir / kFusionModelFile).string());

    const auto mode = cfg.train.reduction;
    const std::size_t vdim = fusion::reduced_video_dim(mode);
    std::vector<const fusion::ClipSample*> test;
    for (const auto& s : samples)
        if (s.split == fusion::Split::Test) test.push_back(&s);
    if (test.empty()) throw ValidationError("manifest has no test clips");

    nn::Dataset a{nn::Matrix(test.size(), embed::kAudioEmbeddingDim), {}};
    nn::Dataset v{nn::Matrix(test.size(), vdim), {}};
    nn::Dataset f{nn::Matrix(test.size(), embed::kAudioEmbeddingDim + vdim), {}};
    for (std::size_t r = 0; r < test.size(); ++r) {
        const auto fused = fusion::fuse(test[r]->audio, fusion::reduce_video(test[r]->video, mode), mode, test[r]->label);
        std::copy_n(fused.values.begin(), embed::kAudioEmbeddingDim, a.inputs.row(r).begin());
        std::copy(fused.values.begin() + embed::kAudioEmbeddingDim, fused.values.end(), v.inputs.row(r).begin());
        std::copy(fused.values.begin(), fused.values.end(), f.inputs.row(r).begin());
        for (auto* d : {&a, &v, &f}) d->labels.push_back(test[r]->label);
    }

    EvalResult r;
    r.n_test = test.size();
    r.audio_accuracy = nn::evaluate(audio_model, a);
    r.video_accuracy = nn::evaluate(video_model, v);
    r.fusion_accuracy = nn::evaluate(fusion_model, f);
    return r;
}

}  // namespace maivar::pipeline
