#include "doctest.h"

#include "oracles.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/injection.hpp"
#include "tokencomp/mask.hpp"
#include "tokencomp/mock_backend.hpp"

#include <numeric>
#include <random>

using namespace tokencomp;

namespace {

TokenSet random_tokens(std::mt19937_64& rng, int k, int d, TokenSource src) {
    return TokenSet(k, d, src, oracle::random_vector(rng, static_cast<std::size_t>(k) * d));
}

TokenIndexSet random_subset(std::mt19937_64& rng, int k) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i)
        if (rng() % 3 == 0) idx.push_back(i);
    return TokenIndexSet(idx);
}

RasterImage random_image(std::uint64_t seed, int w, int h, int channels) {
    std::mt19937_64 rng(seed);
    RasterImage img(w, h, channels);
    for (auto& v : img.pixels()) v = std::uniform_real_distribution<double>(0, 1)(rng);
    return img;
}

}  // namespace

TEST_CASE("blend_tokens hand examples") {
    const TokenSet gen(2, 2, TokenSource::generative, {1, 0, 1, 0});
    const TokenSet aut(2, 2, TokenSource::identity, {0, 1, 0, 1});
    InjectionConfig cfg;

    const TokenSet fg_only = blend_tokens(gen, aut, {0}, {}, cfg);
    CHECK(fg_only.row(0)[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(fg_only.row(0)[1] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(fg_only.row(1)[0] == 1.0);
    CHECK(fg_only.source() == TokenSource::blended);

    const TokenSet both = blend_tokens(gen, aut, {0}, {0}, cfg);
    CHECK(both.row(0)[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(both.row(0)[1] == doctest::Approx(0.2).epsilon(1e-15));

    cfg.overlap = OverlapMode::disjoint;
    const TokenSet disjoint = blend_tokens(gen, aut, {0}, {0}, cfg);
    CHECK(disjoint.row(0)[0] == doctest::Approx(0.7).epsilon(1e-15));

    InjectionConfig zero{.beta_fg = 0.0, .beta_bg = 0.0};
    const TokenSet none = blend_tokens(gen, aut, {0, 1}, {1}, zero);
    CHECK(std::vector<double>(none.values().begin(), none.values().end()) ==
          std::vector<double>(gen.values().begin(), gen.values().end()));

    CHECK_THROWS_AS(blend_tokens(gen, TokenSet(3, 2, TokenSource::identity, std::vector<double>(6)), {0}, {}, cfg),
                    ContractError);
    CHECK_THROWS_AS(blend_tokens(gen, aut, {2}, {}, cfg), ContractError);
}

TEST_CASE("blend_tokens properties") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
        const TokenSet gen = random_tokens(rng, 16, 4, TokenSource::generative);
        const TokenSet aut = random_tokens(rng, 16, 4, TokenSource::identity);
        const TokenIndexSet s_fg = random_subset(rng, 16);
        const TokenIndexSet s_bg = random_subset(rng, 16);

        auto at_beta = [&](double b) {
            return blend_tokens(gen, aut, s_fg, s_bg, {.beta_fg = b, .beta_bg = 0.2});
        };
        const TokenSet t0 = at_beta(0.0), th = at_beta(0.5), t1 = at_beta(1.0);
        for (int i = 0; i < 16; ++i) {
            for (int d = 0; d < 4; ++d) {
                CHECK(std::fabs(th.row(i)[d] - 0.5 * (t0.row(i)[d] + t1.row(i)[d])) <= 1e-12);
                const double lo = std::min(gen.row(i)[d], aut.row(i)[d]);
                const double hi = std::max(gen.row(i)[d], aut.row(i)[d]);
                CHECK(th.row(i)[d] >= lo - 1e-12);
                CHECK(th.row(i)[d] <= hi + 1e-12);
                if (!s_fg.contains(i) && !s_bg.contains(i)) CHECK(th.row(i)[d] == gen.row(i)[d]);
            }
        }
    }

    std::vector<int> all(16);
    std::iota(all.begin(), all.end(), 0);
    const TokenSet gen = random_tokens(rng, 16, 4, TokenSource::generative);
    const TokenSet aut = random_tokens(rng, 16, 4, TokenSource::identity);
    const TokenSet full = blend_tokens(gen, aut, TokenIndexSet(all), TokenIndexSet{1, 2}, {.beta_fg = 1.0, .beta_bg = 1.0});
    CHECK(std::vector<double>(full.values().begin(), full.values().end()) ==
          std::vector<double>(aut.values().begin(), aut.values().end()));
}

TEST_CASE("validate injection config") {
    CHECK_NOTHROW(validate(InjectionConfig{}, 64));
    CHECK_THROWS_AS(validate({.beta_fg = 1.5}, 64), ConfigError);
    CHECK_THROWS_AS(validate({.beta_bg = -0.1}, 64), ConfigError);
    CHECK_THROWS_AS(validate({.n_fg = 65}, 64), ConfigError);
    CHECK_THROWS_AS(overlap_mode_from_string("union"), ConfigError);
}

namespace {

struct Fixture {
    MockBackend backend{{.latent_height = 4, .latent_width = 4, .attention = AttentionFixture::delta}};
    InjectionInputs inputs;

    Fixture() {
        inputs.canvas = random_image(1, 16, 16, 3);
        inputs.foreground = random_image(2, 8, 8, 4);
        inputs.bbox = {0.5, 0.5, 0.5, 0.5};
        inputs.caption = "a test element";
        // Foreground covers latent cells 0, 1 and 5.
        inputs.fg_mask = BinaryMask(4, 4, {1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        inputs.bg_mask = complement(inputs.fg_mask);
        inputs.scoring_sigma = 0.5;
        inputs.seed = 3;
    }
};

}  // namespace

TEST_CASE("run_token_injection with the delta fixture") {
    Fixture f;
    const InjectionConfig cfg{.n_fg = 6, .n_bg = 4};
    const InjectionResult r = run_token_injection(f.inputs, f.backend, cfg);

    // Token i attends only to cell i mod 16, so r_fg[i] is 1 exactly for i mod 16 in {0, 1, 5}.
    for (int i = 0; i < 64; ++i) {
        const bool fg = i % 16 == 0 || i % 16 == 1 || i % 16 == 5;
        CHECK(r.trace.scores.fg[i] == (fg ? 1.0 : 0.0));
        CHECK(r.trace.scores.bg[i] == (fg ? 0.0 : 1.0));
    }
    CHECK(r.trace.s_fg == TokenIndexSet{0, 1, 5, 16, 17, 21});
    CHECK(r.trace.s_bg == TokenIndexSet{2, 3, 4, 6});
    CHECK(r.trace.probe_conditioning == "identity");
    CHECK(r.trace.enabled);

    const TokenSet gen = f.backend.generate_tokens({f.inputs.canvas, f.inputs.foreground, f.inputs.caption, f.inputs.bbox});
    const TokenSet aut = f.backend.encode_identity(naive_composite(f.inputs.canvas, f.inputs.foreground, f.inputs.bbox));
    CHECK(r.tokens == blend_tokens(gen, aut, r.trace.s_fg, r.trace.s_bg, cfg));
    CHECK(r.trace.composite_checksum == checksum(naive_composite(f.inputs.canvas, f.inputs.foreground, f.inputs.bbox)));
    CHECK(r.trace.canvas_checksum == checksum(f.inputs.canvas));

    const InjectionResult again = run_token_injection(f.inputs, f.backend, cfg);
    CHECK(again.tokens == r.tokens);
    CHECK(again.trace == r.trace);
    CHECK(to_json(again.trace) == to_json(r.trace));
}

TEST_CASE("run_token_injection degenerate arms") {
    Fixture f;
    const TokenSet gen = f.backend.generate_tokens({f.inputs.canvas, f.inputs.foreground, f.inputs.caption, f.inputs.bbox});

    const InjectionResult off = run_token_injection(f.inputs, f.backend, {.enabled = false});
    CHECK(off.tokens == gen);
    CHECK_FALSE(off.trace.enabled);

    const InjectionResult empty = run_token_injection(f.inputs, f.backend, {.n_fg = 0, .n_bg = 0});
    CHECK(std::vector<double>(empty.tokens.values().begin(), empty.tokens.values().end()) ==
          std::vector<double>(gen.values().begin(), gen.values().end()));
    CHECK(empty.trace.s_fg.empty());
}
