#include "doctest.h"

#include "support.hpp"
#include "tokencomp/adapter.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/mock_backend.hpp"
#include "tokencomp/relevance.hpp"

using namespace tokencomp;

namespace {

/// Two-head stack wrapped around the mock: head 0 carries the mock's map
/// scaled by 2, head 1 is all zeros, so the head mean equals the mock map.
struct FakeStack {
    MockBackend mock{{.tokens = 8, .token_dim = 4, .latent_height = 2, .latent_width = 2, .attention_layers = 2}};
    int layers_returned = 2;
    int token_rows = 8;

    BackendInfo describe() const { return {"fake", 8, 4, 2, 2, 2}; }
    TokenSet visual_encoder(const RasterImage& image) const {
        TokenSet t = mock.encode_identity(image);
        t.set_source(TokenSource::generative);  // the adapter must retag
        return t;
    }
    TokenSet prompt_decoder(const CompositionPrompt& prompt) const {
        if (token_rows != 8) return TokenSet(token_rows, 4, TokenSource::generative, std::vector<double>(token_rows * 4));
        return mock.generate_tokens(prompt);
    }
    std::vector<LayerAttention> unet_cross_attention(const TokenSet& tokens, const Latent& latent, double sigma) const {
        std::vector<LayerAttention> out;
        const AttentionStack s = mock.attention_probe(tokens, latent, sigma);
        for (int l = 0; l < layers_returned; ++l) {
            LayerAttention la{2, 8, 2, 2, {}};
            for (double v : s.layers[l % 2].values()) la.values.push_back(2.0 * v);
            la.values.resize(la.values.size() * 2, 0.0);
            out.push_back(std::move(la));
        }
        return out;
    }
    Latent vae_encode(const RasterImage& image) const { return mock.encode_latent(image); }
    RasterImage vae_decode(const Latent& latent) const { return mock.decode_latent(latent); }
    std::vector<double> unet_velocity(const Latent& latent, double sigma, const TokenSet& tokens) const {
        return mock.predict_velocity(latent, sigma, tokens);
    }
};

static_assert(GenerativeStack<FakeStack>);
static_assert(!GenerativeStack<int>);

}  // namespace

TEST_CASE("average_heads") {
    const LayerAttention la{2, 1, 1, 2, {1.0, 3.0, 0.0, 1.0}};
    const AttentionMap m = average_heads(la);
    CHECK(m.token(0)[0] == 0.5);
    CHECK(m.token(0)[1] == 2.0);
    CHECK_THROWS_AS(average_heads({2, 1, 1, 2, {1.0}}), ContractError);
}

TEST_CASE("StackBackend enforces the contract") {
    const StackBackend<FakeStack> backend{FakeStack{}};
    const RasterImage img = support::random_image(1, 4, 4);
    const TokenSet id = backend.encode_identity(img);
    CHECK(id.source() == TokenSource::identity);

    const AttentionStack stack = backend.attention_probe(id, backend.encode_latent(img), 0.5);
    const AttentionStack direct = backend.stack().mock.attention_probe(id, backend.encode_latent(img), 0.5);
    REQUIRE(stack.layers.size() == 2);
    for (std::size_t k = 0; k < direct.layers[0].values().size(); ++k)
        CHECK(stack.layers[0].values()[k] == doctest::Approx(direct.layers[0].values()[k]).epsilon(1e-15));

    CHECK_THROWS_AS(backend.predict_velocity(backend.encode_latent(img), 0.0, id), ContractError);

    FakeStack few;
    few.layers_returned = 1;
    const StackBackend<FakeStack> short_stack{few};
    CHECK_THROWS_AS(short_stack.attention_probe(id, short_stack.encode_latent(img), 0.5), ContractError);

    FakeStack wide;
    wide.token_rows = 9;
    const StackBackend<FakeStack> wrong_k{wide};
    CHECK_THROWS_AS(wrong_k.generate_tokens({img, img, "x", {}}), ContractError);
}
