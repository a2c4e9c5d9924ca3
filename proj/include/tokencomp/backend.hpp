#pragma once

#include "tokencomp/geometry.hpp"
#include "tokencomp/raster.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tokencomp {

enum class TokenSource { generative, identity, blended };

std::string_view to_string(TokenSource source);

/// K x D conditioning tokens, row-major (one row per token).
class TokenSet {
public:
    TokenSet() = default;
    TokenSet(int count, int dim, TokenSource source, std::vector<double> values);

    int count() const { return count_; }
    int dim() const { return dim_; }
    TokenSource source() const { return source_; }
    void set_source(TokenSource s) { source_ = s; }

    std::span<double> row(int i) { return {values_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)}; }
    std::span<const double> row(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> values() const { return values_; }

    /// Column-wise mean over tokens (length D).
    std::vector<double> mean() const;

    bool operator==(const TokenSet&) const = default;

private:
    int count_ = 0;
    int dim_ = 0;
    TokenSource source_ = TokenSource::generative;
    std::vector<double> values_;
};

struct LatentShape {
    int height = 0;
    int width = 0;
    int channels = 0;
    // Pixel extent the latent decodes to.
    int pixel_width = 0;
    int pixel_height = 0;

    std::size_t size() const { return static_cast<std::size_t>(height) * width * channels; }
    bool operator==(const LatentShape&) const = default;
};

/// Latent image (H_lat x W_lat x C_lat, channel-last) tagged with its noise level.
struct Latent {
    LatentShape shape;
    std::vector<double> values;
    double sigma = 0.0;

    bool operator==(const Latent&) const = default;
};

/// Per-token spatial attention, K x H_lat x W_lat.
class AttentionMap {
public:
    AttentionMap() = default;
    AttentionMap(int tokens, int height, int width, double fill = 0.0);
    AttentionMap(int tokens, int height, int width, std::vector<double> values);

    int tokens() const { return tokens_; }
    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t cells() const { return static_cast<std::size_t>(height_) * width_; }

    std::span<double> token(int i) { return {values_.data() + i * cells(), cells()}; }
    std::span<const double> token(int i) const { return {values_.data() + i * cells(), cells()}; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool operator==(const AttentionMap&) const = default;

private:
    int tokens_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<double> values_;
};

/// One aggregated map per cross-attention layer.
struct AttentionStack {
    std::vector<AttentionMap> layers;
};

struct CompositionPrompt {
    RasterImage background;
    RasterImage foreground;
    std::string caption;
    BoundingBox bbox;
};

struct BackendInfo {
    std::string name;
    int tokens = 0;
    int token_dim = 0;
    int latent_height = 0;
    int latent_width = 0;
    int attention_layers = 0;
};

/// The generative stack used by the compositor. Implementations must be
/// pure: identical inputs give bit-identical outputs, and every method is
/// safe to call concurrently.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    virtual BackendInfo info() const = 0;

    /// Visual-encoder tokens of an image (tagged identity).
    virtual TokenSet encode_identity(const RasterImage& image) const = 0;
    /// Prompt-conditioned tokens (tagged generative).
    virtual TokenSet generate_tokens(const CompositionPrompt& prompt) const = 0;
    /// Cross-attention maps of one scoring pass conditioned on `tokens`.
    virtual AttentionStack attention_probe(const TokenSet& tokens, const Latent& latent, double sigma) const = 0;

    virtual Latent encode_latent(const RasterImage& image) const = 0;
    virtual RasterImage decode_latent(const Latent& latent) const = 0;

    /// Flow velocity, noise-minus-data convention: an Euler step toward
    /// smaller sigma moves toward data. Requires sigma in (0, 1].
    virtual std::vector<double> predict_velocity(const Latent& latent, double sigma, const TokenSet& tokens) const = 0;
};

}  // namespace tokencomp
