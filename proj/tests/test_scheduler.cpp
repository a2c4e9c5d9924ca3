#include "doctest.h"

#include "oracles.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/mock_backend.hpp"
#include "tokencomp/scheduler.hpp"

#include <random>

using namespace tokencomp;

TEST_CASE("make_schedule") {
    CHECK(make_schedule(4, ScheduleShape::linear).sigmas == std::vector<double>{1.0, 0.75, 0.5, 0.25, 0.0});
    CHECK(make_schedule(7, ScheduleShape::shifted, 1.0).sigmas == make_schedule(7, ScheduleShape::linear).sigmas);

    const SigmaSchedule s = make_schedule(4, ScheduleShape::shifted, 3.0);
    for (int k = 0; k <= 4; ++k) {
        const double u = 1.0 - k / 4.0;
        CHECK(std::fabs(s.sigmas[k] - 3.0 * u / (1.0 + 2.0 * u)) <= 1e-12);
    }
    for (int n : {1, 2, 5, 28, 100}) {
        for (auto shape : {ScheduleShape::linear, ScheduleShape::shifted}) {
            const SigmaSchedule g = make_schedule(n, shape, 3.0);
            CHECK(g.n_steps() == n);
            CHECK(g.sigmas.front() == 1.0);
            CHECK(g.sigmas.back() == 0.0);
            for (int k = 0; k < n; ++k) CHECK(g.sigmas[k] > g.sigmas[k + 1]);
        }
    }
    CHECK_THROWS_AS(schedule_shape_from_string("cosine"), ConfigError);
    CHECK(schedule_shape_from_string("shifted") == ScheduleShape::shifted);
    CHECK(scoring_index(make_schedule(28, ScheduleShape::linear)) == 14);
    CHECK(scoring_index(make_schedule(5, ScheduleShape::linear)) == 2);
}

TEST_CASE("add_noise") {
    const LatentShape shape{2, 2, 3, 2, 2};
    std::mt19937_64 rng(1);
    const Latent x0{shape, oracle::random_vector(rng, shape.size()), 0.0};
    const auto eps = oracle::random_vector(rng, shape.size());
    CHECK(add_noise(x0, eps, 0.0).values == x0.values);
    CHECK(add_noise(x0, eps, 1.0).values == eps);
    CHECK(add_noise(x0, eps, 0.3).sigma == 0.3);

    const Latent twos{shape, std::vector<double>(shape.size(), 2.0), 0.0};
    for (double v : add_noise(twos, std::vector<double>(shape.size(), 0.0), 0.5).values) CHECK(v == 1.0);

    CHECK_THROWS_AS(add_noise(x0, std::vector<double>(3), 0.5), ContractError);
}

TEST_CASE("start_index_for and invert_canvas") {
    const SigmaSchedule lin = make_schedule(4, ScheduleShape::linear);
    CHECK(start_index_for(lin, 1.0) == 0);
    CHECK(start_index_for(lin, 0.6) == 2);
    CHECK(start_index_for(lin, 0.5) == 2);
    CHECK(start_index_for(lin, 0.01) == 4);
    CHECK_THROWS_AS(start_index_for(lin, 0.0), ConfigError);
    CHECK_THROWS_AS(start_index_for(lin, 1.5), ConfigError);

    const MockBackend backend({.latent_height = 4, .latent_width = 4});
    std::mt19937_64 rng(2);
    RasterImage canvas(16, 16, 3);
    for (auto& v : canvas.pixels()) v = std::uniform_real_distribution<double>(0, 1)(rng);

    const InvertedCanvas full = invert_canvas(canvas, 1.0, lin, 9, backend);
    CHECK(full.start_index == 0);
    CHECK(full.latent.values == seeded_noise(9, full.latent.shape));

    const InvertedCanvas a = invert_canvas(canvas, 0.6, lin, 9, backend);
    const InvertedCanvas b = invert_canvas(canvas, 0.6, lin, 9, backend);
    CHECK(a.start_index == 2);
    CHECK(a.latent == b.latent);
    CHECK(a.latent.sigma == 0.5);
}

TEST_CASE("seeded noise ignores canvas content") {
    const MockBackend backend({.latent_height = 4, .latent_width = 4});
    const SigmaSchedule lin = make_schedule(4, ScheduleShape::linear);
    const RasterImage black(8, 8, 3, 0.0), white(8, 8, 3, 1.0);
    const InvertedCanvas a = invert_canvas(black, 1.0, lin, 3, backend);
    const InvertedCanvas b = invert_canvas(white, 1.0, lin, 3, backend);
    CHECK(a.latent.values == b.latent.values);
    CHECK(seeded_noise(3, a.latent.shape) != seeded_noise(4, a.latent.shape));
}

TEST_CASE("denoise on the mock field") {
    const MockBackend backend({.latent_height = 4, .latent_width = 4});
    std::mt19937_64 rng(5);
    RasterImage img(8, 8, 3);
    for (auto& v : img.pixels()) v = std::uniform_real_distribution<double>(0, 1)(rng);
    const TokenSet tokens = backend.encode_identity(img);
    const LatentShape shape = backend.latent_shape(8, 8);
    const auto target = backend.target(tokens, shape);
    const auto expected = oracle::linear_flow_at_zero(target);

    SUBCASE("fixed point") {
        const SigmaSchedule s = make_schedule(4, ScheduleShape::shifted);
        for (int start = 0; start < 4; ++start) {
            const Latent x{shape, target, s.sigmas[start]};
            const Latent out = denoise(x, start, s, tokens, backend);
            for (std::size_t k = 0; k < target.size(); ++k) CHECK(std::fabs(out.values[k] - target[k]) <= 1e-12);
        }
    }
    SUBCASE("pure noise start, step count independence") {
        const Latent start{shape, seeded_noise(1, shape), 1.0};
        const Latent four = denoise(start, 0, make_schedule(4, ScheduleShape::linear), tokens, backend);
        const Latent eight = denoise(start, 0, make_schedule(8, ScheduleShape::shifted), tokens, backend);
        CHECK(four.sigma == 0.0);
        for (std::size_t k = 0; k < target.size(); ++k) {
            CHECK(std::fabs(four.values[k] - expected[k]) <= 1e-9);
            CHECK(std::fabs(four.values[k] - eight.values[k]) <= 1e-9);
        }
    }
    SUBCASE("sigma mismatch") {
        const Latent x{shape, target, 0.9};
        CHECK_THROWS_AS(denoise(x, 0, make_schedule(4, ScheduleShape::linear), tokens, backend), ContractError);
    }
}
