#pragma once

#include "tokencomp/backend.hpp"
#include "tokencomp/mask.hpp"
#include "tokencomp/relevance.hpp"

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

namespace tokencomp {

/// How an index selected for both regions is blended.
enum class OverlapMode {
    literal,   // background blend reads T_gen and overwrites the foreground blend
    disjoint,  // foreground indices are removed from the background set first
};

OverlapMode overlap_mode_from_string(std::string_view name);
std::string_view to_string(OverlapMode mode);

struct InjectionConfig {
    double beta_fg = 0.3;
    double beta_bg = 0.2;
    int n_fg = 16;
    int n_bg = 8;
    bool enabled = true;
    OverlapMode overlap = OverlapMode::literal;
};

/// Throws ConfigError on betas outside [0, 1] or counts outside [0, K].
void validate(const InjectionConfig& cfg, int token_count);

/// T_final = T_gen, then rows in S_fg become (1 - b_fg) T_gen + b_fg T_auto,
/// then rows in S_bg become (1 - b_bg) T_gen + b_bg T_auto. Every other row
/// is copied from T_gen bit for bit.
TokenSet blend_tokens(const TokenSet& t_gen, const TokenSet& t_auto, const TokenIndexSet& s_fg,
                      const TokenIndexSet& s_bg, const InjectionConfig& cfg);

struct InjectionTrace {
    bool enabled = true;
    double beta_fg = 0.0;
    double beta_bg = 0.0;
    int n_fg = 0;
    int n_bg = 0;
    OverlapMode overlap = OverlapMode::literal;
    double scoring_sigma = 0.0;
    std::string probe_conditioning;  // source tag of the tokens fed to the probe
    std::string canvas_checksum;     // canvas the prompt and composite were built on
    std::string composite_checksum;  // image passed to encode_identity
    RelevanceScores scores;
    TokenIndexSet s_fg;
    TokenIndexSet s_bg;

    bool operator==(const InjectionTrace&) const = default;
};

nlohmann::json to_json(const InjectionTrace& trace);

struct InjectionInputs {
    RasterImage foreground;  // already fitted to the pixel box of `bbox`
    RasterImage canvas;
    BoundingBox bbox;
    std::string caption;
    BinaryMask fg_mask;  // at latent resolution
    BinaryMask bg_mask;  // at latent resolution
    double scoring_sigma = 0.5;
    std::uint64_t seed = 0;
};

struct InjectionResult {
    TokenSet tokens;  // T_final (or T_gen when disabled)
    InjectionTrace trace;
    AttentionMap attention;  // layer-averaged scoring maps; empty when disabled
};

/// Cross-attention guided token injection for one element: T_gen from the
/// prompt, T_auto from the naive composite, one scoring probe conditioned on
/// T_auto, per-token relevance, top-N selection, and the convex blend. With
/// cfg.enabled false the generative tokens are returned untouched.
InjectionResult run_token_injection(const InjectionInputs& in, const ModelBackend& backend,
                                    const InjectionConfig& cfg);

}  // namespace tokencomp
