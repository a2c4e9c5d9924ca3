#include "tokencomp/cli.hpp"

#include "tokencomp/compositor.hpp"
#include "tokencomp/config.hpp"
#include "tokencomp/design.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/identity.hpp"
#include "tokencomp/image_io.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <spdlog/spdlog.h>
#include <sstream>

namespace tokencomp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

int exit_code_for(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const CompositionFailure& e) {
        return exit_code_for(e.cause());
    } catch (const InputError&) {
        return kExitInput;
    } catch (const std::exception&) {
        return kExitBackend;
    }
}

template <typename F>
int guarded(const char* command, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        spdlog::error("{}: {}", command, e.what());
        return exit_code_for(std::current_exception());
    }
}

PipelineConfig load_pipeline_config(const fs::path& config_path, std::optional<std::uint64_t> seed, bool debug) {
    json overrides = json::object();
    if (seed) overrides["seed"] = *seed;
    if (debug) overrides["debug_intermediates"] = true;
    return resolve_config({read_config_layer(config_path), overrides});
}

struct LoadedDesign {
    DesignDocument doc;
    FileAssetStore assets;
};

LoadedDesign load_design_file(const fs::path& path) {
    DesignDocument doc = load_design(read_text(path));
    return {std::move(doc), FileAssetStore(path.parent_path())};
}

void log_injection_defaults(const ComposeConfig& c) {
    spdlog::info("token injection: enabled={} beta_fg={} beta_bg={} n_fg={} n_bg={} overlap={}", c.injection.enabled,
                 c.injection.beta_fg, c.injection.beta_bg, c.injection.n_fg, c.injection.n_bg,
                 to_string(c.injection.overlap));
    spdlog::info("scheduler: shape={} shift={} n_steps={} strength={}", to_string(c.scheduler.shape),
                 c.scheduler.shift, c.scheduler.n_steps, c.scheduler.strength);
}

json backend_json(const BackendInfo& info) {
    return {{"name", info.name},
            {"tokens", info.tokens},
            {"token_dim", info.token_dim},
            {"latent_height", info.latent_height},
            {"latent_width", info.latent_width},
            {"attention_layers", info.attention_layers}};
}

}  // namespace

int cmd_compose(const ComposeArgs& args) {
    return guarded("compose", [&] {
        const PipelineConfig cfg = load_pipeline_config(args.config, args.seed, args.debug_intermediates);
        const LoadedDesign design = load_design_file(args.design);
        const auto backend = make_backend(cfg);
        log_injection_defaults(cfg.compose);
        fs::create_directories(args.out_dir);

        const ComposeConfig& c = cfg.compose;
        const SigmaSchedule schedule = make_schedule(c.scheduler.n_steps, c.scheduler.shape, c.scheduler.shift);
        json manifest = {{"design", args.design.generic_string()},
                         {"canvas", {{"width", design.doc.canvas.width}, {"height", design.doc.canvas.height}}},
                         {"config", to_json(cfg)},
                         {"backend", backend_json(backend->info())},
                         {"sigma_grid", schedule.sigmas},
                         {"text_elements", design.doc.text_elements}};

        StepObserver observer;
        if (cfg.debug_intermediates) {
            const fs::path dir = args.out_dir / "intermediates";
            fs::create_directories(dir);
            observer = [dir](std::size_t index, const DesignElement& element, const RasterImage& canvas) {
                write_png(dir / fmt::format("step_{:02}_{}.png", index, element.id), canvas);
            };
        }

        CompositionResult result;
        try {
            result = compose_document(design.doc, c, *backend, design.assets, observer);
        } catch (const CompositionFailure& failure) {
            manifest["status"] = "failed";
            manifest["error"] = {{"element_id", failure.element_id()}, {"message", failure.what()}};
            manifest["trace"] = to_json(failure.partial_trace());
            write_text(args.out_dir / "manifest.json", manifest.dump(2) + "\n");
            throw;
        }

        write_png(args.out_dir / "backing.png", result.backing);
        manifest["status"] = "ok";
        manifest["trace"] = to_json(result.trace);
        manifest["backing_image"] = {{"file", "backing.png"}, {"checksum", checksum(result.backing)}};
        write_text(args.out_dir / "manifest.json", manifest.dump(2) + "\n");
        spdlog::info("composed {} element(s) into {}", result.trace.elements.size(),
                     (args.out_dir / "backing.png").string());
        return static_cast<int>(kExitOk);
    });
}

int cmd_probe(const ProbeArgs& args) {
    return guarded("probe", [&] {
        PipelineConfig cfg = load_pipeline_config(args.config, args.seed, false);
        // Relevance only exists when the scoring pass runs.
        cfg.compose.injection.enabled = true;
        const LoadedDesign design = load_design_file(args.design);
        const DesignElement* target = design.doc.find(args.element_id);
        if (target == nullptr) throw InputError(fmt::format("unknown element id '{}'", args.element_id));
        if (target->kind == ElementKind::background) {
            throw InputError(fmt::format("element '{}' is the background; probe a foreground element", target->id));
        }
        const auto backend = make_backend(cfg);
        log_injection_defaults(cfg.compose);

        RasterImage canvas = render_background(design.doc, design.assets);
        for (const DesignElement& e : foreground_elements(design.doc)) {
            if (e.id == target->id) break;
            canvas = compose_element(canvas, e, cfg.compose, *backend, design.assets).canvas;
        }
        const ElementOutcome outcome = compose_element(canvas, *target, cfg.compose, *backend, design.assets);
        const InjectionResult& inj = outcome.injection;

        fs::create_directories(args.out_dir / "heatmaps");
        std::string csv = "token_index,r_fg,r_bg\n";
        for (std::size_t i = 0; i < inj.trace.scores.fg.size(); ++i) {
            csv += fmt::format("{},{},{}\n", i, inj.trace.scores.fg[i], inj.trace.scores.bg[i]);
        }
        write_text(args.out_dir / "relevance.csv", csv);

        const AttentionMap& ca = inj.attention;
        for (int i = 0; i < ca.tokens(); ++i) {
            auto map = ca.token(i);
            const double peak = *std::max_element(map.begin(), map.end());
            std::vector<double> gray(map.begin(), map.end());
            if (peak > 0.0) {
                for (auto& v : gray) v /= peak;
            }
            write_gray_png(args.out_dir / "heatmaps" / fmt::format("token_{:02}.png", i), ca.width(), ca.height(),
                           gray);
        }
        write_mask_png(args.out_dir / "fg_mask.png", outcome.fg_mask);

        json selection = to_json(inj.trace);
        selection["element_id"] = target->id;
        selection["config"] = to_json(cfg);
        write_text(args.out_dir / "selection.json", selection.dump(2) + "\n");
        spdlog::info("probe '{}': |S_fg|={} |S_bg|={}", target->id, inj.trace.s_fg.size(), inj.trace.s_bg.size());
        return static_cast<int>(kExitOk);
    });
}

int cmd_eval(const EvalArgs& args) {
    return guarded("eval", [&] {
        const PipelineConfig cfg = load_pipeline_config(args.config, std::nullopt, false);
        json manifest;
        try {
            manifest = json::parse(read_text(args.pairs));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("pairs manifest: malformed JSON: ") + e.what());
        }
        const json& list = manifest.is_object() && manifest.contains("pairs") ? manifest["pairs"] : manifest;
        if (!list.is_array()) throw ParseError("pairs manifest: expected an array of pairs");
        if (list.empty()) throw InputError("pairs manifest is empty");

        const fs::path base = args.pairs.parent_path();
        auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
        std::vector<ImagePair> pairs;
        for (std::size_t n = 0; n < list.size(); ++n) {
            const json& entry = list[n];
            const std::string where = fmt::format("pairs[{}]", n);
            if (!entry.is_object() || !entry.contains("foreground") || !entry.contains("composed") ||
                !entry["foreground"].is_string() || !entry["composed"].is_string()) {
                throw ParseError(where + ": needs string fields 'foreground' and 'composed'");
            }
            RasterImage composed = read_png(resolve(entry["composed"].get<std::string>()));
            if (entry.contains("bbox")) {
                const json& b = entry["bbox"];
                if (!b.is_array() || b.size() != 4) throw ParseError(where + ": field 'bbox' must have 4 numbers");
                const BoundingBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
                if (auto why = validate_bbox(box); !why.empty()) throw ParseError(where + ": bbox invalid (" + why + ")");
                composed = crop(composed, to_pixel_box(box, composed.width(), composed.height()).box);
            }
            const fs::path fg_path = resolve(entry["foreground"].get<std::string>());
            RasterImage fg = is_svg_path(fg_path) ? rasterize_svg(fg_path, composed.width(), composed.height())
                                                  : read_png(fg_path);
            pairs.emplace_back(std::move(fg), std::move(composed));
        }

        const auto embedder = make_embedder(cfg.embedder);
        const IdentityReport report = evaluate_pairs(pairs, *embedder);
        const std::string table = format_table(report);
        if (args.out.has_parent_path()) fs::create_directories(args.out.parent_path());
        write_text(args.out, to_json(report).dump(2) + "\n");
        fs::path table_path = args.out;
        table_path.replace_extension(".txt");
        write_text(table_path, table);
        fmt::print("{}", table);
        return static_cast<int>(kExitOk);
    });
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Layered design compositing with cross-attention guided token injection"};
    app.require_subcommand(1);

    ComposeArgs compose;
    std::uint64_t compose_seed = 0;
    auto* c = app.add_subcommand("compose", "Compose a design document into a backing image");
    c->add_option("--design", compose.design, "Design JSON")->required();
    c->add_option("--config", compose.config, "Pipeline config JSON");
    c->add_option("--out", compose.out_dir, "Output directory")->required();
    auto* c_seed = c->add_option("--seed", compose_seed, "Override the config seed");
    c->add_flag("--debug-intermediates", compose.debug_intermediates, "Write the canvas after every element");

    ProbeArgs probe;
    std::uint64_t probe_seed = 0;
    auto* p = app.add_subcommand("probe", "Export relevance scores and attention heatmaps for one element");
    p->add_option("--design", probe.design, "Design JSON")->required();
    p->add_option("--config", probe.config, "Pipeline config JSON");
    p->add_option("--element", probe.element_id, "Element id")->required();
    p->add_option("--out", probe.out_dir, "Output directory")->required();
    auto* p_seed = p->add_option("--seed", probe_seed, "Override the config seed");

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Identity-preservation metrics over foreground/composed pairs");
    e->add_option("--pairs", eval.pairs, "Pairs manifest JSON")->required();
    e->add_option("--config", eval.config, "Pipeline config JSON");
    e->add_option("--out", eval.out, "Report JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitInput;
    }
    if (c->parsed()) {
        if (c_seed->count() > 0) compose.seed = compose_seed;
        return cmd_compose(compose);
    }
    if (p->parsed()) {
        if (p_seed->count() > 0) probe.seed = probe_seed;
        return cmd_probe(probe);
    }
    return cmd_eval(eval);
}

}  // namespace tokencomp
