#include "tokencomp/injection.hpp"

#include "tokencomp/errors.hpp"
#include "tokencomp/scheduler.hpp"

#include <string>

namespace tokencomp {

OverlapMode overlap_mode_from_string(std::string_view name) {
    if (name == "literal") return OverlapMode::literal;
    if (name == "disjoint") return OverlapMode::disjoint;
    throw ConfigError("unknown overlap mode '" + std::string(name) + "' (expected literal or disjoint)");
}

std::string_view to_string(OverlapMode mode) { return mode == OverlapMode::literal ? "literal" : "disjoint"; }

void validate(const InjectionConfig& cfg, int token_count) {
    if (!(cfg.beta_fg >= 0.0 && cfg.beta_fg <= 1.0)) throw ConfigError("beta_fg must lie in [0, 1]");
    if (!(cfg.beta_bg >= 0.0 && cfg.beta_bg <= 1.0)) throw ConfigError("beta_bg must lie in [0, 1]");
    if (cfg.n_fg < 0 || cfg.n_fg > token_count) throw ConfigError("n_fg must lie in [0, K]");
    if (cfg.n_bg < 0 || cfg.n_bg > token_count) throw ConfigError("n_bg must lie in [0, K]");
}

TokenSet blend_tokens(const TokenSet& t_gen, const TokenSet& t_auto, const TokenIndexSet& s_fg,
                      const TokenIndexSet& s_bg, const InjectionConfig& cfg) {
    if (t_gen.count() != t_auto.count() || t_gen.dim() != t_auto.dim()) {
        throw ContractError("blend_tokens: T_gen and T_auto differ in shape");
    }
    for (const TokenIndexSet* s : {&s_fg, &s_bg}) {
        if (!s->empty() && s->indices().back() >= t_gen.count()) {
            throw ContractError("blend_tokens: token index out of range");
        }
    }
    const TokenIndexSet bg = cfg.overlap == OverlapMode::disjoint ? s_bg.without(s_fg) : s_bg;

    TokenSet out = t_gen;
    auto blend_rows = [&](const TokenIndexSet& set, double beta) {
        for (int i : set.indices()) {
            auto dst = out.row(i);
            auto g = t_gen.row(i);
            auto a = t_auto.row(i);
            for (std::size_t d = 0; d < dst.size(); ++d) dst[d] = (1.0 - beta) * g[d] + beta * a[d];
        }
    };
    blend_rows(s_fg, cfg.beta_fg);
    blend_rows(bg, cfg.beta_bg);
    out.set_source(TokenSource::blended);
    return out;
}

nlohmann::json to_json(const InjectionTrace& trace) {
    auto indices = [](const TokenIndexSet& s) { return std::vector<int>(s.indices().begin(), s.indices().end()); };
    return {{"enabled", trace.enabled},
            {"beta_fg", trace.beta_fg},
            {"beta_bg", trace.beta_bg},
            {"n_fg", trace.n_fg},
            {"n_bg", trace.n_bg},
            {"overlap", to_string(trace.overlap)},
            {"scoring_sigma", trace.scoring_sigma},
            {"probe_conditioning", trace.probe_conditioning},
            {"canvas_checksum", trace.canvas_checksum},
            {"composite_checksum", trace.composite_checksum},
            {"r_fg", trace.scores.fg},
            {"r_bg", trace.scores.bg},
            {"s_fg", indices(trace.s_fg)},
            {"s_bg", indices(trace.s_bg)}};
}

InjectionResult run_token_injection(const InjectionInputs& in, const ModelBackend& backend,
                                    const InjectionConfig& cfg) {
    const BackendInfo info = backend.info();
    validate(cfg, info.tokens);

    InjectionResult result;
    InjectionTrace& trace = result.trace;
    trace.enabled = cfg.enabled;
    trace.beta_fg = cfg.beta_fg;
    trace.beta_bg = cfg.beta_bg;
    trace.n_fg = cfg.n_fg;
    trace.n_bg = cfg.n_bg;
    trace.overlap = cfg.overlap;
    trace.scoring_sigma = in.scoring_sigma;
    trace.canvas_checksum = checksum(in.canvas);

    const CompositionPrompt prompt{in.canvas, in.foreground, in.caption, in.bbox};
    TokenSet t_gen = backend.generate_tokens(prompt);
    if (!cfg.enabled) {
        result.tokens = std::move(t_gen);
        return result;
    }

    const RasterImage composite = naive_composite(in.canvas, in.foreground, in.bbox);
    trace.composite_checksum = checksum(composite);
    const TokenSet t_auto = backend.encode_identity(composite);
    if (t_auto.source() != TokenSource::identity) {
        throw ContractError("scoring probe must be conditioned on identity tokens");
    }
    trace.probe_conditioning = std::string(to_string(t_auto.source()));

    const Latent clean = backend.encode_latent(composite);
    const Latent probe_latent = add_noise(clean, seeded_noise(in.seed, clean.shape), in.scoring_sigma);
    result.attention = aggregate_attention(backend.attention_probe(t_auto, probe_latent, in.scoring_sigma));

    trace.scores = relevance(result.attention, in.fg_mask, in.bg_mask);
    trace.s_fg = select_top(trace.scores.fg, cfg.n_fg);
    trace.s_bg = select_top(trace.scores.bg, cfg.n_bg);
    result.tokens = blend_tokens(t_gen, t_auto, trace.s_fg, trace.s_bg, cfg);
    return result;
}

}  // namespace tokencomp
