// maivar: audio-image + video late-fusion action recognition pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/pipeline/commands.hpp"
#include "maivar/pipeline/report.hpp"
#include "maivar/pipeline/selftest.hpp"
#include "maivar/pipeline/synth.hpp"

namespace fs = std::filesystem;
using namespace maivar;
using namespace maivar::pipeline;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::string out;
};

RunConfig resolve_config(const Globals& g) {
    RunConfig cfg = g.config.empty() ? default_run_config(g.seed.value_or(0)) : load_run_config(g.config, g.seed);
    if (g.jobs) cfg.jobs = *g.jobs;
    return cfg;
}

dsp::FeatureKind resolve_kind(const std::string& flag, const RunConfig& cfg) {
    if (flag.empty()) return cfg.kind;
    const auto kind = dsp::parse_feature_kind(flag);
    if (!kind) throw ValidationError("unknown representation '" + flag + "'");
    return *kind;
}

std::vector<dsp::FeatureKind> resolve_kinds(const std::string& flag, const RunConfig& cfg) {
    if (flag == "all") return {dsp::kAllFeatureKinds.begin(), dsp::kAllFeatureKinds.end()};
    return {resolve_kind(flag, cfg)};
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multimodal audio-image and video action recognition"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Globals g;
    app.add_option("--config", g.config, "Run configuration file (key = value)");
    app.add_option("--seed", g.seed, "Global seed; derives extractor and training seeds");
    app.add_option("--jobs", g.jobs, "Worker threads for per-clip work");
    app.add_option("--out", g.out, "Output directory");

    std::string manifest_path, kind_flag, images_dir, embeddings_dir, run_dir, fault;
    std::vector<std::string> run_dirs;
    SynthOptions synth_opts;

    auto* synth = app.add_subcommand("synth", "Generate the complementary synthetic dataset");
    synth->add_option("--classes", synth_opts.classes)->capture_default_str();
    synth->add_option("--clips", synth_opts.clips_per_class, "Clips per class")->capture_default_str();
    synth->add_option("--frames", synth_opts.frames_per_clip, "Video frames per clip")->capture_default_str();
    synth->add_option("--seconds", synth_opts.seconds, "Clip length")->capture_default_str();

    auto* repr = app.add_subcommand("repr", "Render audio-image PNGs");
    repr->add_option("--manifest", manifest_path)->required();
    repr->add_option("--kind", kind_flag, "Representation, or 'all'");

    auto* extract = app.add_subcommand("extract", "Extract audio and video embeddings");
    extract->add_option("--manifest", manifest_path)->required();
    extract->add_option("--kind", kind_flag, "Representation");
    extract->add_option("--images", images_dir, "Read PNGs written by 'repr' instead of rendering");

    auto* train = app.add_subcommand("train", "Train audio, video and fusion classifiers");
    train->add_option("--manifest", manifest_path)->required();
    train->add_option("--embeddings", embeddings_dir, "Directory with audio.maiv / video.maiv (default: --out)");

    auto* eval = app.add_subcommand("eval", "Score saved models on the test split");
    eval->add_option("--manifest", manifest_path)->required();
    eval->add_option("--run", run_dir, "Run directory written by 'train'")->required();
    eval->add_option("--embeddings", embeddings_dir, "Embedding directory (default: --run)");

    auto* report = app.add_subcommand("report", "Compare run directories by representation");
    report->add_option("runs", run_dirs, "Run directories")->required();

    auto* selftest = app.add_subcommand("selftest", "Run built-in correctness checks");
    selftest->add_option("--inject-fault", fault, "Corrupt one check on purpose");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        const fs::path out = g.out;

        if (synth->parsed()) {
            synth_opts.out_dir = out.empty() ? fs::path("synth") : out;
            synth_opts.seed = g.seed.value_or(0);
            synth_opts.jobs = g.jobs.value_or(1);
            const auto r = cmd_synth(synth_opts);
            std::cout << "wrote " << r.clips << " clips (" << r.train << " train, " << r.test << " test)\n"
                      << "manifest " << r.manifest.string() << "\nconfig   " << r.config.string() << "\n";
            return 0;
        }

        if (selftest->parsed()) {
            const auto results = run_selftest(fault.empty() ? std::nullopt : std::optional(fault));
            bool ok = true;
            for (const auto& c : results) {
                std::printf("%-4s %-18s %7.3fs  %s\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.seconds, c.detail.c_str());
                ok = ok && c.passed;
            }
            std::cout << (ok ? "all checks passed\n" : "selftest FAILED\n");
            return ok ? 0 : kExitValidation;
        }

        if (report->parsed()) {
            std::vector<fs::path> dirs(run_dirs.begin(), run_dirs.end());
            const auto table = load_comparison(dirs);
            const auto md = render_markdown(table);
            std::cout << md;
            if (!out.empty()) {
                fs::create_directories(out);
                write_file_bytes((out / "report.md").string(), md);
                write_file_bytes((out / "report.csv").string(), render_csv(table));
            }
            return 0;
        }

        const RunConfig cfg = resolve_config(g);
        const auto manifest = read_manifest(manifest_path);

        if (repr->parsed()) {
            int rc = 0;
            for (auto kind : resolve_kinds(kind_flag, cfg)) {
                const auto r = cmd_repr(manifest, {kind, out.empty() ? fs::path("images") : out, cfg.jobs});
                std::cout << dsp::to_string(kind) << ": " << r.written << " images\n";
                for (const auto& f : r.failures) std::cerr << "  " << f.clip_id << ": " << f.message << "\n";
                if (!r.failures.empty()) rc = kExitRuntime;
            }
            return rc;
        }

        if (extract->parsed()) {
            ExtractOptions opts;
            opts.kind = resolve_kind(kind_flag, cfg);
            opts.seed = cfg.extractor_seed;
            opts.images_dir = images_dir;
            opts.out_dir = out.empty() ? fs::path("run") : out;
            opts.jobs = cfg.jobs;
            const auto r = cmd_extract(manifest, opts);
            std::cout << r.audio_records << " audio and " << r.video_records << " video embeddings ("
                      << r.video_passthrough << " passed through) in " << opts.out_dir.string() << "\n";
            return 0;
        }

        if (train->parsed()) {
            TrainOptions opts;
            opts.config = cfg;
            opts.out_dir = out.empty() ? fs::path("run") : out;
            opts.embeddings_dir = embeddings_dir.empty() ? opts.out_dir : fs::path(embeddings_dir);
            const auto r = cmd_train(manifest, opts).report;
            std::cout << "audio  " << pct(r.audio.test_accuracy) << "\nvideo  " << pct(r.video.test_accuracy)
                      << "\nfusion " << pct(r.fusion.test_accuracy) << "\ntransfer identity "
                      << (r.transfer_identity_exact ? "exact" : "BROKEN") << " on " << r.transfer_identity_checked
                      << " test clips\n";
            return 0;
        }

        if (eval->parsed()) {
            const auto r = cmd_eval(manifest, run_dir, embeddings_dir);
            std::cout << r.n_test << " test clips\naudio  " << pct(r.audio_accuracy) << "\nvideo  "
                      << pct(r.video_accuracy) << "\nfusion " << pct(r.fusion_accuracy) << "\n";
            return 0;
        }
    } catch (const MissingModality& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const MissingInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ShapeMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
