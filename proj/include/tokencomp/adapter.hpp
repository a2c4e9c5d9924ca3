#pragma once

#include "tokencomp/backend.hpp"
#include "tokencomp/errors.hpp"

#include <concepts>
#include <utility>
#include <vector>

namespace tokencomp {

/// Cross-attention probabilities captured from one UNet attention layer,
/// heads x K x H_lat x W_lat.
struct LayerAttention {
    int heads = 0;
    int tokens = 0;
    int height = 0;
    int width = 0;
    std::vector<double> values;
};

/// Mean over heads; the adapter reduces heads inside each layer before the
/// relevance stage averages layers.
AttentionMap average_heads(const LayerAttention& layer);

/// What a real generative stack has to provide to drive the compositor.
///
///   visual_encoder        image -> K identity tokens (autoencoder side)
///   prompt_decoder        composition prompt -> K generative tokens
///   unet_cross_attention  one scoring forward pass, per-layer head maps
///   vae_encode/vae_decode canvas <-> latent
///   unet_velocity         flow velocity in the noise-minus-data convention
///   describe              static dimensions
template <typename S>
concept GenerativeStack = requires(const S& s, const RasterImage& image, const CompositionPrompt& prompt,
                                   const TokenSet& tokens, const Latent& latent, double sigma) {
    { s.describe() } -> std::same_as<BackendInfo>;
    { s.visual_encoder(image) } -> std::same_as<TokenSet>;
    { s.prompt_decoder(prompt) } -> std::same_as<TokenSet>;
    { s.unet_cross_attention(tokens, latent, sigma) } -> std::same_as<std::vector<LayerAttention>>;
    { s.vae_encode(image) } -> std::same_as<Latent>;
    { s.vae_decode(latent) } -> std::same_as<RasterImage>;
    { s.unet_velocity(latent, sigma, tokens) } -> std::same_as<std::vector<double>>;
};

/// ModelBackend over any GenerativeStack: tags token sources, enforces the
/// K x D and latent-grid contracts, and reduces attention heads.
template <GenerativeStack S>
class StackBackend final : public ModelBackend {
public:
    explicit StackBackend(S stack) : stack_(std::move(stack)), info_(stack_.describe()) {}

    BackendInfo info() const override { return info_; }

    TokenSet encode_identity(const RasterImage& image) const override {
        TokenSet t = checked(stack_.visual_encoder(image));
        t.set_source(TokenSource::identity);
        return t;
    }

    TokenSet generate_tokens(const CompositionPrompt& prompt) const override {
        TokenSet t = checked(stack_.prompt_decoder(prompt));
        t.set_source(TokenSource::generative);
        return t;
    }

    AttentionStack attention_probe(const TokenSet& tokens, const Latent& latent, double sigma) const override {
        checked(tokens);
        AttentionStack out;
        for (const LayerAttention& layer : stack_.unet_cross_attention(tokens, latent, sigma)) {
            if (layer.tokens != info_.tokens || layer.height != info_.latent_height ||
                layer.width != info_.latent_width) {
                throw ContractError("stack attention layer does not match K x H_lat x W_lat");
            }
            out.layers.push_back(average_heads(layer));
        }
        if (static_cast<int>(out.layers.size()) != info_.attention_layers) {
            throw ContractError("stack returned an unexpected number of attention layers");
        }
        return out;
    }

    Latent encode_latent(const RasterImage& image) const override { return stack_.vae_encode(image); }
    RasterImage decode_latent(const Latent& latent) const override { return stack_.vae_decode(latent); }

    std::vector<double> predict_velocity(const Latent& latent, double sigma, const TokenSet& tokens) const override {
        if (!(sigma > 0.0 && sigma <= 1.0)) throw ContractError("predict_velocity: sigma must lie in (0, 1]");
        checked(tokens);
        std::vector<double> v = stack_.unet_velocity(latent, sigma, tokens);
        if (v.size() != latent.values.size()) throw ContractError("stack velocity shape differs from the latent");
        return v;
    }

    const S& stack() const { return stack_; }

private:
    const TokenSet& checked(const TokenSet& t) const {
        if (t.count() != info_.tokens || t.dim() != info_.token_dim) {
            throw ContractError("token set shape does not match the stack (K x D)");
        }
        return t;
    }
    TokenSet checked(TokenSet&& t) const {
        checked(static_cast<const TokenSet&>(t));
        return std::move(t);
    }

    S stack_;
    BackendInfo info_;
};

}  // namespace tokencomp
