#include "maivar/pipeline/report.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"
#include "maivar/pipeline/commands.hpp"

namespace maivar::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json train_config_json(const nn::TrainConfig& t) {
    return json{{"learning_rate", t.learning_rate}, {"batch_size", t.batch_size}, {"epochs", t.epochs},
                {"l1_lambda", t.l1_lambda},         {"beta1", t.adam_beta1},       {"beta2", t.adam_beta2},
                {"eps", t.adam_eps},                {"seed", t.seed},              {"shuffle", t.shuffle}};
}

json phase_json(const fusion::PhaseReport& p) {
    json j{{"dims", p.dims}, {"train_accuracy", p.train_accuracy}, {"test_accuracy", p.test_accuracy}};
    if (!p.metrics.empty()) {
        j["final_loss"] = p.metrics.back().loss;
        j["final_train_accuracy"] = p.metrics.back().accuracy;
    }
    return j;
}

std::size_t display_rank(dsp::FeatureKind kind) {
    const auto it = std::find(dsp::kAllFeatureKinds.begin(), dsp::kAllFeatureKinds.end(), kind);
    return static_cast<std::size_t>(it - dsp::kAllFeatureKinds.begin());
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
    return buf;
}

std::string number(double v) { return json(v).dump(); }

}  // namespace

std::string report_json(const fusion::RunReport& report, const RunConfig& cfg, const DatasetManifest& manifest) {
    json j;
    j["format"] = "maivar-run";
    j["version"] = 1;
    j["representation"] = std::string(dsp::to_string(cfg.kind));
    j["representation_name"] = std::string(dsp::display_name(cfg.kind));
    j["classes"] = manifest.classes;
    j["n_classes"] = report.n_classes;
    j["n_train"] = report.n_train;
    j["n_test"] = report.n_test;
    j["accuracy"] = json{{"audio", report.audio.test_accuracy},
                         {"video", report.video.test_accuracy},
                         {"fusion", report.fusion.test_accuracy}};
    j["phases"] = json{{"audio", phase_json(report.audio)},
                       {"video", phase_json(report.video)},
                       {"fusion", phase_json(report.fusion)}};

    json layers = json::array();
    for (const auto& l : report.transfer.layers)
        layers.push_back(json{{"layer", l.layer},
                              {"action", std::string(fusion::to_string(l.action))},
                              {"copied_params", l.copied_params},
                              {"fresh_params", l.fresh_params}});
    j["transfer"] = json{{"enabled", cfg.train.transfer},
                         {"identity_exact", report.transfer_identity_exact},
                         {"identity_checked", report.transfer_identity_checked},
                         {"copied_params", report.transfer.copied_params},
                         {"fresh_params", report.transfer.fresh_params},
                         {"layers", layers}};

    j["config"] = json{{"seed", cfg.seed},
                       {"extractor_seed", cfg.extractor_seed},
                       {"hidden", cfg.train.hidden},
                       {"reduction", std::string(fusion::to_string(cfg.train.reduction))},
                       {"audio", train_config_json(cfg.train.audio)},
                       {"video", train_config_json(cfg.train.video)},
                       {"fusion", train_config_json(cfg.train.fusion)}};
    return j.dump(2) + "\n";
}

std::string curves_csv(const fusion::RunReport& report) {
    std::string out = "model,epoch,loss,accuracy,test_accuracy\n";
    for (auto [name, phase] : {std::pair{"audio", &report.audio}, std::pair{"video", &report.video},
                               std::pair{"fusion", &report.fusion}}) {
        for (const auto& m : phase->metrics) {
            out += name;
            out += ',' + std::to_string(m.epoch) + ',' + number(m.loss) + ',' + number(m.accuracy) + ',';
            if (m.eval_accuracy) out += number(*m.eval_accuracy);
            out += '\n';
        }
    }
    return out;
}

ComparisonTable load_comparison(const std::vector<fs::path>& run_dirs) {
    ComparisonTable table;
    std::vector<std::string> bad;
    for (const auto& dir : run_dirs) {
        const auto path = dir / kReportFile;
        std::error_code ec;
        if (!fs::is_regular_file(path, ec)) {
            bad.push_back(dir.string() + " (no " + kReportFile + ")");
            continue;
        }
        const auto j = json::parse(read_file_bytes(path.string()), nullptr, false);
        const auto kind = j.is_object() ? dsp::parse_feature_kind(j.value("representation", std::string{})) : std::nullopt;
        if (!kind || !j.contains("accuracy") || !j["accuracy"].is_object()) {
            bad.push_back(dir.string() + " (unreadable " + kReportFile + ")");
            continue;
        }
        const auto& acc = j["accuracy"];
        ComparisonRow row;
        row.kind = *kind;
        row.run_dir = dir.string();
        row.audio_accuracy = acc.value("audio", 0.0);
        row.video_accuracy = acc.value("video", 0.0);
        row.fusion_accuracy = acc.value("fusion", 0.0);
        table.rows.push_back(row);
    }
    if (!bad.empty()) {
        std::string msg = "missing or invalid run reports:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw ValidationError(msg);
    }

    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) { return display_rank(a.kind) < display_rank(b.kind); });
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (!table.best_audio || table.rows[i].audio_accuracy > table.rows[*table.best_audio].audio_accuracy)
            table.best_audio = i;
        if (!table.best_fusion || table.rows[i].fusion_accuracy > table.rows[*table.best_fusion].fusion_accuracy)
            table.best_fusion = i;
    }
    return table;
}

std::string render_markdown(const ComparisonTable& table) {
    std::string out = "| Representation | Audio | Fusion |\n|---|---:|---:|\n";
    const double best = table.best_fusion ? table.rows[*table.best_fusion].fusion_accuracy : 0.0;
    for (const auto& r : table.rows) {
        const auto fusion = percent(r.fusion_accuracy);
        out += "| " + std::string(dsp::display_name(r.kind)) + " | " + percent(r.audio_accuracy) + " | " +
               (r.fusion_accuracy == best ? "**" + fusion + "**" : fusion) + " |\n";
    }
    if (table.rows.empty()) return out;

    out += '\n';
    auto [lo, hi] = std::minmax_element(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
        return a.video_accuracy < b.video_accuracy;
    });
    if (lo->video_accuracy == hi->video_accuracy)
        out += "Video-only accuracy: " + percent(lo->video_accuracy) + "%.\n";
    else
        out += "Video-only accuracy: " + percent(lo->video_accuracy) + "% to " + percent(hi->video_accuracy) + "%.\n";

    const auto& ba = table.rows[*table.best_audio];
    const auto& bf = table.rows[*table.best_fusion];
    out += "\nBest audio-only representation: " + std::string(dsp::display_name(ba.kind)) + " (" +
           percent(ba.audio_accuracy) + "%).\n";
    out += "Best fusion representation: " + std::string(dsp::display_name(bf.kind)) + " (" +
           percent(bf.fusion_accuracy) + "%).\n";
    return out;
}

std::string render_csv(const ComparisonTable& table) {
    std::string out = "representation,audio_accuracy,fusion_accuracy,video_accuracy,run_dir\n";
    for (const auto& r : table.rows)
        out += std::string(dsp::display_name(r.kind)) + ',' + number(r.audio_accuracy) + ',' + number(r.fusion_accuracy) +
               ',' + number(r.video_accuracy) + ',' + r.run_dir + '\n';
    if (table.best_audio) out += "# best_audio," + std::string(dsp::display_name(table.rows[*table.best_audio].kind)) + '\n';
    if (table.best_fusion)
        out += "# best_fusion," + std::string(dsp::display_name(table.rows[*table.best_fusion].kind)) + '\n';
    return out;
}

}  // namespace maivar::pipeline
