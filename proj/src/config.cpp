#include "tokencomp/config.hpp"

#include "tokencomp/errors.hpp"

#include <fmt/format.h>
#include <fstream>
#include <spdlog/spdlog.h>
#include <sstream>

namespace tokencomp {

using nlohmann::json;

json to_json(const PipelineConfig& cfg) {
    const MockOptions& m = cfg.backend.mock;
    const ComposeConfig& c = cfg.compose;
    json scoring = c.scheduler.scoring_index ? json(*c.scheduler.scoring_index) : json(nullptr);
    return {
        {"seed", c.seed},
        {"backend",
         {{"kind", cfg.backend.kind},
          {"tokens", m.tokens},
          {"token_dim", m.token_dim},
          {"latent_height", m.latent_height},
          {"latent_width", m.latent_width},
          {"attention_layers", m.attention_layers},
          {"attention_fixture", to_string(m.attention)},
          {"attention_temperature", m.attention_temperature},
          {"generative_noise", m.generative_noise},
          {"identity_noise", m.identity_noise},
          {"sigma_min", m.sigma_min}}},
        {"injection",
         {{"enabled", c.injection.enabled},
          {"beta_fg", c.injection.beta_fg},
          {"beta_bg", c.injection.beta_bg},
          {"n_fg", c.injection.n_fg},
          {"n_bg", c.injection.n_bg},
          {"overlap", to_string(c.injection.overlap)}}},
        {"scheduler",
         {{"n_steps", c.scheduler.n_steps},
          {"shape", to_string(c.scheduler.shape)},
          {"shift", c.scheduler.shift},
          {"strength", c.scheduler.strength},
          {"scoring_index", scoring}}},
        {"compose",
         {{"svg_paste_back", c.svg_paste_back},
          {"alpha_threshold", c.alpha_threshold},
          {"mask_resolution", to_string(c.mask_resolution)},
          {"image_region", to_string(c.image_region)},
          {"region_dilation", c.region_dilation}}},
        {"embedder", {{"kind", cfg.embedder.kind}, {"grid", cfg.embedder.grid}}},
        {"debug_intermediates", cfg.debug_intermediates},
    };
}

namespace {

class Reader {
public:
    Reader(const json& root, std::string path) : root_(root), path_(std::move(path)) {
        if (!root_.is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", path_));
    }

    Reader section(const char* key) const { return Reader(root_.at(key), name(key)); }

    bool flag(const char* key) const {
        const json& v = root_.at(key);
        if (!v.is_boolean()) throw ConfigError(fmt::format("config: '{}' must be a boolean", name(key)));
        return v.get<bool>();
    }
    int integer(const char* key, int lo, int hi) const {
        const json& v = root_.at(key);
        if (!v.is_number_integer()) throw ConfigError(fmt::format("config: '{}' must be an integer", name(key)));
        const auto x = v.get<long long>();
        if (x < lo || x > hi) throw ConfigError(fmt::format("config: '{}' must lie in [{}, {}]", name(key), lo, hi));
        return static_cast<int>(x);
    }
    std::uint64_t unsigned64(const char* key) const {
        const json& v = root_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError(fmt::format("config: '{}' must be a non-negative integer", name(key)));
        }
        return v.get<std::uint64_t>();
    }
    double real(const char* key, double lo, double hi) const {
        const json& v = root_.at(key);
        if (!v.is_number()) throw ConfigError(fmt::format("config: '{}' must be a number", name(key)));
        const double x = v.get<double>();
        if (!(x >= lo && x <= hi)) throw ConfigError(fmt::format("config: '{}' must lie in [{}, {}]", name(key), lo, hi));
        return x;
    }
    std::string text(const char* key) const {
        const json& v = root_.at(key);
        if (!v.is_string()) throw ConfigError(fmt::format("config: '{}' must be a string", name(key)));
        return v.get<std::string>();
    }
    bool is_null(const char* key) const { return !root_.contains(key) || root_.at(key).is_null(); }

    void warn_unknown(const json& known) const {
        for (const auto& [key, _] : root_.items()) {
            if (!known.contains(key)) spdlog::warn("config: ignoring unknown key '{}'", name(key.c_str()));
        }
    }

private:
    std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& root_;
    std::string path_;
};

template <typename F>
auto as_config_error(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("config: '{}': {}", key, e.what()));
    }
}

}  // namespace

PipelineConfig resolve_config(std::initializer_list<json> layers) {
    const json defaults = to_json(PipelineConfig{});
    json merged = defaults;
    for (const json& layer : layers) {
        if (layer.is_null()) continue;
        if (!layer.is_object()) throw ConfigError("config: each layer must be a JSON object");
        merged.merge_patch(layer);
    }
    // merge_patch drops keys set to null; restore them so every key exists.
    for (const auto& [section, body] : defaults.items()) {
        if (!merged.contains(section)) merged[section] = body;
        if (body.is_object()) {
            if (!merged[section].is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", section));
            for (const auto& [key, value] : body.items()) {
                if (!merged[section].contains(key)) merged[section][key] = value;
            }
        }
    }

    const Reader root(merged, "");
    root.warn_unknown(defaults);
    PipelineConfig cfg;
    ComposeConfig& c = cfg.compose;
    c.seed = root.unsigned64("seed");
    cfg.debug_intermediates = root.flag("debug_intermediates");

    const Reader b = root.section("backend");
    b.warn_unknown(defaults["backend"]);
    cfg.backend.kind = b.text("kind");
    if (cfg.backend.kind != "mock") {
        throw ConfigError(fmt::format("config: backend.kind '{}' is not available in this build (expected mock)",
                                      cfg.backend.kind));
    }
    MockOptions& m = cfg.backend.mock;
    m.seed = c.seed;
    m.tokens = b.integer("tokens", 1, 4096);
    m.token_dim = b.integer("token_dim", 1, 65536);
    m.latent_height = b.integer("latent_height", 1, 4096);
    m.latent_width = b.integer("latent_width", 1, 4096);
    m.attention_layers = b.integer("attention_layers", 1, 1024);
    m.attention = as_config_error("backend.attention_fixture",
                                  [&] { return attention_fixture_from_string(b.text("attention_fixture")); });
    m.attention_temperature = b.real("attention_temperature", 0.0, 1e6);
    m.generative_noise = b.real("generative_noise", 0.0, 1e6);
    m.identity_noise = b.real("identity_noise", 0.0, 1e6);
    m.sigma_min = b.real("sigma_min", 1e-300, 1.0);
    if (m.sigma_min <= 0.0) throw ConfigError("config: 'backend.sigma_min' must be positive");

    const Reader inj = root.section("injection");
    inj.warn_unknown(defaults["injection"]);
    c.injection.enabled = inj.flag("enabled");
    c.injection.beta_fg = inj.real("beta_fg", 0.0, 1.0);
    c.injection.beta_bg = inj.real("beta_bg", 0.0, 1.0);
    c.injection.n_fg = inj.integer("n_fg", 0, m.tokens);
    c.injection.n_bg = inj.integer("n_bg", 0, m.tokens);
    c.injection.overlap = as_config_error("injection.overlap", [&] { return overlap_mode_from_string(inj.text("overlap")); });

    const Reader sch = root.section("scheduler");
    sch.warn_unknown(defaults["scheduler"]);
    c.scheduler.n_steps = sch.integer("n_steps", 1, 100000);
    c.scheduler.shape = as_config_error("scheduler.shape", [&] { return schedule_shape_from_string(sch.text("shape")); });
    c.scheduler.shift = sch.real("shift", 1e-12, 1e12);
    c.scheduler.strength = sch.real("strength", 0.0, 1.0);
    if (c.scheduler.strength <= 0.0) throw ConfigError("config: 'scheduler.strength' must lie in (0, 1]");
    if (!sch.is_null("scoring_index")) {
        c.scheduler.scoring_index = sch.integer("scoring_index", 0, c.scheduler.n_steps - 1);
    }

    const Reader comp = root.section("compose");
    comp.warn_unknown(defaults["compose"]);
    c.svg_paste_back = comp.flag("svg_paste_back");
    c.alpha_threshold = comp.real("alpha_threshold", 0.0, 1.0);
    c.mask_resolution = as_config_error("compose.mask_resolution",
                                        [&] { return mask_resolution_from_string(comp.text("mask_resolution")); });
    c.image_region = as_config_error("compose.image_region",
                                     [&] { return image_region_from_string(comp.text("image_region")); });
    c.region_dilation = comp.integer("region_dilation", 0, 1 << 20);

    const Reader emb = root.section("embedder");
    emb.warn_unknown(defaults["embedder"]);
    cfg.embedder.kind = emb.text("kind");
    cfg.embedder.grid = emb.integer("grid", 1, 4096);
    if (cfg.embedder.kind != "reference") {
        throw ConfigError(fmt::format("config: embedder.kind '{}' is unknown (expected reference)", cfg.embedder.kind));
    }
    return cfg;
}

json read_config_layer(const std::filesystem::path& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::unique_ptr<ModelBackend> make_backend(const PipelineConfig& cfg) {
    return std::make_unique<MockBackend>(cfg.backend.mock);
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& cfg) {
    return std::make_unique<ReferenceEmbedder>(cfg.grid);
}

}  // namespace tokencomp
