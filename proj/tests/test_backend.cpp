#include "doctest.h"

#include "oracles.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/mock_backend.hpp"

#include <limits>
#include <random>

using namespace tokencomp;

namespace {

RasterImage random_image(std::uint64_t seed, int w, int h, int channels = 3) {
    std::mt19937_64 rng(seed);
    RasterImage img(w, h, channels);
    for (auto& v : img.pixels()) v = std::uniform_real_distribution<double>(0, 1)(rng);
    return img;
}

CompositionPrompt prompt() {
    return {random_image(1, 16, 16), random_image(2, 8, 8, 4), "a red logo", {0.25, 0.25, 0.5, 0.5}};
}

}  // namespace

TEST_CASE("encode_identity") {
    const MockBackend backend;
    const RasterImage img = random_image(3, 16, 16);
    const TokenSet a = backend.encode_identity(img);
    CHECK(a == backend.encode_identity(img));
    CHECK(a.source() == TokenSource::identity);
    CHECK(a.count() == 64);
    CHECK(a.dim() == 16);

    RasterImage changed = img;
    changed.at(5, 7, 1) += 0.01;
    CHECK(backend.encode_identity(changed) != a);

    const TokenSet black = backend.encode_identity(RasterImage(16, 16, 3, 0.0));
    for (double v : black.values()) CHECK(std::isfinite(v));

    RasterImage bad = img;
    bad.at(0, 0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(backend.encode_identity(bad), InputError);

    // Small images are resampled rather than rejected.
    CHECK(backend.encode_identity(random_image(4, 3, 3)).count() == 64);
}

TEST_CASE("identity tokens centre on the image features") {
    const MockBackend backend({.latent_height = 4, .latent_width = 4});
    const RasterImage img = random_image(5, 8, 8);
    const auto features = backend.identity_features(backend.encode_latent(img));
    const auto mean = backend.encode_identity(img).mean();
    for (std::size_t d = 0; d < features.size(); ++d) CHECK(std::fabs(mean[d] - features[d]) <= 1e-12);
}

TEST_CASE("generate_tokens") {
    const MockBackend backend;
    const CompositionPrompt p = prompt();
    const TokenSet a = backend.generate_tokens(p);
    CHECK(a == backend.generate_tokens(p));
    CHECK(a.source() == TokenSource::generative);

    CompositionPrompt caption = p;
    caption.caption = "a blue logo";
    CHECK(backend.generate_tokens(caption) != a);

    CompositionPrompt box = p;
    box.bbox.left = 0.3;
    CHECK(backend.generate_tokens(box) != a);

    CompositionPrompt seeded = p;
    CHECK(MockBackend({.seed = 1}).generate_tokens(seeded) != a);

    CompositionPrompt empty = p;
    empty.caption.clear();
    CHECK_THROWS_AS(backend.generate_tokens(empty), ContractError);
}

TEST_CASE("attention_probe") {
    const MockBackend backend;
    const RasterImage img = random_image(6, 16, 16);
    const TokenSet tokens = backend.encode_identity(img);
    const Latent latent = backend.encode_latent(img);
    const AttentionStack a = backend.attention_probe(tokens, latent, 0.5);
    const AttentionStack b = backend.attention_probe(tokens, latent, 0.5);
    REQUIRE(a.layers.size() == 3);
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        CHECK(a.layers[l] == b.layers[l]);
        CHECK(a.layers[l].tokens() == 64);
        CHECK(a.layers[l].height() == 8);
        for (double v : a.layers[l].values()) CHECK(v >= 0.0);
    }

    const MockBackend delta({.latent_height = 4, .latent_width = 4, .attention = AttentionFixture::delta});
    const RasterImage small = random_image(7, 8, 8);
    const AttentionStack d = delta.attention_probe(delta.encode_identity(small), delta.encode_latent(small), 0.5);
    for (const auto& layer : d.layers) {
        for (int i = 0; i < 64; ++i) {
            for (std::size_t c = 0; c < 16; ++c) CHECK(layer.token(i)[c] == (c == static_cast<std::size_t>(i % 16) ? 1.0 : 0.0));
        }
    }

    const Latent wrong_grid = MockBackend({.latent_height = 4, .latent_width = 4}).encode_latent(img);
    CHECK_THROWS_AS(backend.attention_probe(tokens, wrong_grid, 0.5), ContractError);
}

TEST_CASE("latent round trip") {
    const MockBackend backend;
    for (auto [w, h] : {std::pair{16, 16}, std::pair{13, 9}, std::pair{64, 40}}) {
        const RasterImage img = random_image(w * h, w, h);
        const Latent lat = backend.encode_latent(img);
        CHECK(lat == backend.encode_latent(img));
        const RasterImage back = backend.decode_latent(lat);
        REQUIRE(back.width() == w);
        REQUIRE(back.height() == h);
        for (std::size_t k = 0; k < img.pixels().size(); ++k) CHECK(std::fabs(back.pixels()[k] - img.pixels()[k]) <= 1e-12);
    }
    for (double v : backend.encode_latent(RasterImage(16, 16, 3, 0.0)).values) CHECK(std::isfinite(v));
}

TEST_CASE("predict_velocity") {
    const MockBackend backend;
    const RasterImage img = random_image(8, 16, 16);
    const TokenSet tokens = backend.encode_identity(img);
    const LatentShape shape = backend.latent_shape(16, 16);
    const auto target = backend.target(tokens, shape);

    for (double sigma : {1.0, 0.5, 1e-3}) {
        for (double v : backend.predict_velocity({shape, target, sigma}, sigma, tokens)) CHECK(v == 0.0);
    }

    std::mt19937_64 rng(9);
    const auto c = oracle::random_vector(rng, shape.size());
    std::vector<double> x(target.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = target[k] + c[k];
    const auto v = backend.predict_velocity({shape, x, 1.0}, 1.0, tokens);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::fabs(v[k] - c[k]) <= 1e-12);

    CHECK_THROWS_AS(backend.predict_velocity({shape, target, 0.0}, 0.0, tokens), ContractError);
}

TEST_CASE("target responds to every token") {
    const MockBackend backend;
    const RasterImage img = random_image(10, 16, 16);
    const TokenSet tokens = backend.encode_identity(img);
    const LatentShape shape = backend.latent_shape(16, 16);
    const auto base = backend.target(tokens, shape);
    for (int i : {0, 17, 63}) {
        std::vector<double> values(tokens.values().begin(), tokens.values().end());
        values[static_cast<std::size_t>(i) * 16 + 3] += 0.1;
        const TokenSet moved(64, 16, TokenSource::blended, values);
        CHECK(backend.target(moved, shape) != base);
    }
}

TEST_CASE("mock option validation") {
    CHECK_THROWS_AS(MockBackend({.tokens = 0}), ConfigError);
    CHECK_THROWS_AS(attention_fixture_from_string("gaussian"), ConfigError);
    CHECK(attention_fixture_from_string("delta") == AttentionFixture::delta);
}
