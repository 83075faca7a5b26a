#include "maivar/pipeline/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <map>

#include "maivar/core/binary_io.hpp"
#include "maivar/core/errors.hpp"

namespace maivar::pipeline {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ValidationError("config: bad value '" + std::string(v) + "' for '" + std::string(key) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("config: bad boolean '" + std::string(v) + "' for '" + std::string(key) + "'");
}

std::string fmt_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

nn::TrainConfig* phase_of(fusion::MaivarConfig& m, std::string_view name) {
    if (name == "audio") return &m.audio;
    if (name == "video") return &m.video;
    if (name == "fusion") return &m.fusion;
    return nullptr;
}

void apply_phase_key(nn::TrainConfig& t, std::string_view key, std::string_view field, std::string_view v) {
    if (field == "learning_rate") t.learning_rate = parse_number<double>(key, v);
    else if (field == "batch_size") t.batch_size = parse_number<std::size_t>(key, v);
    else if (field == "epochs") t.epochs = parse_number<std::size_t>(key, v);
    else if (field == "l1") t.l1_lambda = parse_number<double>(key, v);
    else if (field == "seed") t.seed = parse_number<std::uint64_t>(key, v);
    else if (field == "shuffle") t.shuffle = parse_bool(key, v);
    else if (field == "beta1") t.adam_beta1 = parse_number<double>(key, v);
    else if (field == "beta2") t.adam_beta2 = parse_number<double>(key, v);
    else if (field == "eps") t.adam_eps = parse_number<double>(key, v);
    else throw ValidationError("config: unknown key '" + std::string(key) + "'");
}

void apply_key(RunConfig& cfg, std::string_view key, std::string_view v) {
    if (key == "kind") {
        const auto kind = dsp::parse_feature_kind(v);
        if (!kind) throw ValidationError("config: unknown representation '" + std::string(v) + "'");
        cfg.kind = *kind;
    } else if (key == "extractor_seed") {
        cfg.extractor_seed = parse_number<std::uint64_t>(key, v);
    } else if (key == "hidden") {
        cfg.train.hidden.clear();
        while (!v.empty()) {
            const auto comma = v.find(',');
            const auto item = trim(v.substr(0, comma));
            cfg.train.hidden.push_back(parse_number<std::size_t>(key, item));
            v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
        }
    } else if (key == "reduction") {
        const auto mode = fusion::parse_video_reduction(v);
        if (!mode) throw ValidationError("config: unknown reduction '" + std::string(v) + "'");
        cfg.train.reduction = *mode;
    } else if (key == "transfer") {
        cfg.train.transfer = parse_bool(key, v);
    } else if (key == "jobs") {
        cfg.jobs = parse_number<std::size_t>(key, v);
    } else if (const auto dot = key.find('.'); dot != std::string_view::npos) {
        auto* phase = phase_of(cfg.train, key.substr(0, dot));
        if (!phase) throw ValidationError("config: unknown key '" + std::string(key) + "'");
        apply_phase_key(*phase, key, key.substr(dot + 1), v);
    } else {
        throw ValidationError("config: unknown key '" + std::string(key) + "'");
    }
}

}  // namespace

void set_global_seed(RunConfig& cfg, std::uint64_t seed) noexcept {
    cfg.seed = seed;
    cfg.extractor_seed = seed;
    cfg.train.audio.seed = seed + 1;
    cfg.train.video.seed = seed + 2;
    cfg.train.fusion.seed = seed + 3;
}

RunConfig default_run_config(std::uint64_t seed) {
    RunConfig cfg;
    set_global_seed(cfg, seed);
    return cfg;
}

RunConfig parse_run_config(std::string_view text, std::optional<std::uint64_t> seed_override) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::optional<std::uint64_t> seed;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
        else pairs.emplace_back(std::string(key), std::string(value));
    }

    RunConfig cfg = default_run_config(seed.value_or(0));
    for (const auto& [k, v] : pairs) apply_key(cfg, k, v);
    if (seed_override) {
        // The flag re-derives every seed, then explicit per-phase seeds still apply.
        set_global_seed(cfg, *seed_override);
        for (const auto& [k, v] : pairs)
            if (k == "extractor_seed" || k.ends_with(".seed")) apply_key(cfg, k, v);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    return parse_run_config(read_file_bytes(path.string()), seed_override);
}

std::string format_run_config(const RunConfig& cfg) {
    std::string out;
    auto line = [&](std::string_view k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    line("kind", std::string(dsp::to_string(cfg.kind)));
    line("seed", std::to_string(cfg.seed));
    line("extractor_seed", std::to_string(cfg.extractor_seed));
    std::string hidden;
    for (std::size_t i = 0; i < cfg.train.hidden.size(); ++i) {
        if (i) hidden += ',';
        hidden += std::to_string(cfg.train.hidden[i]);
    }
    line("hidden", hidden);
    line("reduction", std::string(fusion::to_string(cfg.train.reduction)));
    line("transfer", cfg.train.transfer ? "true" : "false");
    line("jobs", std::to_string(cfg.jobs));
    for (auto [name, t] : {std::pair{"audio", &cfg.train.audio}, std::pair{"video", &cfg.train.video},
                           std::pair{"fusion", &cfg.train.fusion}}) {
        const std::string p = std::string(name) + ".";
        line(p + "learning_rate", fmt_double(t->learning_rate));
        line(p + "batch_size", std::to_string(t->batch_size));
        line(p + "epochs", std::to_string(t->epochs));
        line(p + "l1", fmt_double(t->l1_lambda));
        line(p + "seed", std::to_string(t->seed));
        line(p + "shuffle", t->shuffle ? "true" : "false");
        line(p + "beta1", fmt_double(t->adam_beta1));
        line(p + "beta2", fmt_double(t->adam_beta2));
        line(p + "eps", fmt_double(t->adam_eps));
    }
    return out;
}

void validate(const RunConfig& cfg) {
    try {
        nn::validate(cfg.train.audio);
        nn::validate(cfg.train.video);
        nn::validate(cfg.train.fusion);
    } catch (const InvalidParameter& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    for (auto h : cfg.train.hidden)
        if (h == 0) throw ValidationError("config: hidden widths must be positive");
}

}  // namespace maivar::pipeline
