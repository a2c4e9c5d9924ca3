#pragma once

#include "tokencomp/backend.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace tokencomp {

enum class AttentionFixture {
    keyed,  // softmax over cells of keyed per-(token, cell) scores
    delta,  // token i attends only to cell (i mod H_lat*W_lat)
};

AttentionFixture attention_fixture_from_string(const std::string& name);
std::string_view to_string(AttentionFixture fixture);

struct MockOptions {
    std::uint64_t seed = 0;
    int tokens = 64;
    int token_dim = 16;
    int latent_height = 8;
    int latent_width = 8;
    int attention_layers = 3;
    AttentionFixture attention = AttentionFixture::keyed;
    double attention_temperature = 3.0;
    // Per-token spread around the feature vector of the respective image.
    double generative_noise = 0.25;
    double identity_noise = 0.05;
    double sigma_min = 1e-4;
};

/// Deterministic desk-scale stand-in for the generative stack.
///
/// Latent: the canvas is split into a latent_height x latent_width grid of
/// blocks; each latent cell stores the block's RGB means followed by the
/// per-pixel residuals of all but the first pixel of the block. This is an
/// invertible linear map, so decode(encode(x)) == x up to rounding.
///
/// Tokens: an orthonormal basis Q (keyed on seed and latent shape) spans a
/// D-dimensional identity subspace of the latent, preferring block-mean
/// coordinates. Identity tokens are Q^T x plus zero-mean per-token spread;
/// generative tokens are Q^T of the prompt's background plus keyed spread.
/// target(T) = Q * mean(T) and the velocity is (x - target) / max(sigma,
/// sigma_min), whose exact flow x(sigma) = target + sigma * c is linear.
class MockBackend final : public ModelBackend {
public:
    explicit MockBackend(MockOptions options = {});

    const MockOptions& options() const { return options_; }

    BackendInfo info() const override;
    TokenSet encode_identity(const RasterImage& image) const override;
    TokenSet generate_tokens(const CompositionPrompt& prompt) const override;
    AttentionStack attention_probe(const TokenSet& tokens, const Latent& latent, double sigma) const override;
    Latent encode_latent(const RasterImage& image) const override;
    RasterImage decode_latent(const Latent& latent) const override;
    std::vector<double> predict_velocity(const Latent& latent, double sigma, const TokenSet& tokens) const override;

    LatentShape latent_shape(int pixel_width, int pixel_height) const;

    /// Denoising target of the velocity field for a latent of `shape`.
    std::vector<double> target(const TokenSet& tokens, const LatentShape& shape) const;

    /// Coordinates of `latent` in the identity subspace (length D).
    std::vector<double> identity_features(const Latent& latent) const;

private:
    struct IdentityBasis {
        std::vector<std::size_t> coords;  // latent indices spanned by the basis
        std::vector<double> q;            // coords.size() x D, row-major
    };

    // Bases are built once per latent shape; copies of a backend share them.
    struct BasisCache {
        std::mutex mu;
        std::map<std::tuple<int, int, int>, std::shared_ptr<const IdentityBasis>> bases;
    };

    std::shared_ptr<const IdentityBasis> identity_basis(const LatentShape& shape) const;
    IdentityBasis build_basis(const LatentShape& shape) const;
    void check_tokens(const TokenSet& tokens) const;

    MockOptions options_;
    std::shared_ptr<BasisCache> cache_ = std::make_shared<BasisCache>();
};

}  // namespace tokencomp
