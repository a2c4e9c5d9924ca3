#include "doctest.h"

#include "oracles.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/mask.hpp"

#include <random>

using namespace tokencomp;

namespace {

BinaryMask random_mask(std::mt19937_64& rng, int h, int w, double p = 0.3) {
    std::bernoulli_distribution on(p);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(h) * w);
    for (auto& c : cells) c = on(rng) ? 1 : 0;
    return BinaryMask(h, w, std::move(cells));
}

RasterImage rgba_with_alpha(int w, int h, double alpha) {
    RasterImage img(w, h, 4, 0.5);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at(x, y, 3) = alpha;
    return img;
}

}  // namespace

TEST_CASE("mask_from_alpha thresholds strictly") {
    CHECK(mask_from_alpha(rgba_with_alpha(3, 2, 1.0), 0.5).count() == 6);
    CHECK(mask_from_alpha(rgba_with_alpha(3, 2, 0.0), 0.5).count() == 0);

    RasterImage img(2, 2, 4, 0.0);
    img.at(0, 0, 3) = 1.0;
    img.at(1, 0, 3) = 0.0;
    img.at(0, 1, 3) = 0.6;
    img.at(1, 1, 3) = 0.4;
    CHECK(mask_from_alpha(img, 0.5) == BinaryMask(2, 2, {1, 0, 1, 0}));
    CHECK(mask_from_alpha(rgba_with_alpha(1, 1, 0.5), 0.5).count() == 0);

    CHECK_THROWS_AS(mask_from_alpha(RasterImage(2, 2, 3), 0.5), PreconditionError);
}

TEST_CASE("mask_from_alpha ignores color channels") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RasterImage a(8, 5, 4);
    for (auto& v : a.pixels()) v = u(rng);
    RasterImage b = a;
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 8; ++x)
            for (int c = 0; c < 3; ++c) b.at(x, y, c) = u(rng);
    CHECK(mask_from_alpha(a) == mask_from_alpha(b));
}

TEST_CASE("mask_from_bbox uses pixel centres") {
    CHECK(mask_from_bbox({0, 0, 1, 1}, 4, 4).count() == 16);

    // Oracle: a cell is on iff its centre lies inside the pixel rectangle.
    auto centre_oracle = [](int x0, int y0, int w, int h, int H, int W) {
        std::vector<std::uint8_t> cells(static_cast<std::size_t>(H) * W, 0);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                const double cx = x + 0.5, cy = y + 0.5;
                cells[y * W + x] = (cx > x0 && cx < x0 + w && cy > y0 && cy < y0 + h) ? 1 : 0;
            }
        return BinaryMask(H, W, cells);
    };
    CHECK(mask_from_bbox({0.5, 0.5, 0.5, 0.5}, 4, 4) == centre_oracle(2, 2, 2, 2, 4, 4));
    CHECK(mask_from_bbox({0.5, 0.5, 0.5, 0.5}, 4, 4) ==
          BinaryMask(4, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1}));
    CHECK(mask_from_bbox({0, 0, 0.25, 0.25}, 8, 8) == centre_oracle(0, 0, 2, 2, 8, 8));
}

TEST_CASE("degenerate bbox clamps to one pixel") {
    const BinaryMask m = mask_from_bbox({0.5, 0.5, 0.01, 0.01}, 4, 4);
    CHECK(m.count() == 1);
    CHECK(m.at(2, 2) == 1);
}

TEST_CASE("complement properties") {
    CHECK(complement(BinaryMask(3, 3, 1)).count() == 0);
    CHECK(complement(BinaryMask(3, 3, 0)).count() == 9);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const BinaryMask m = random_mask(rng, 1 + t % 9, 1 + t % 7);
        const BinaryMask c = complement(m);
        CHECK(complement(c) == m);
        for (std::size_t k = 0; k < m.cells().size(); ++k) {
            CHECK(m.cells()[k] + c.cells()[k] == 1);
            CHECK(m.cells()[k] * c.cells()[k] == 0);
        }
    }
}

TEST_CASE("downsample_to_latent max-pools") {
    CHECK(downsample_to_latent(BinaryMask(8, 8, 1), 2, 2).count() == 4);
    CHECK(downsample_to_latent(BinaryMask(9, 7, 0), 3, 2).count() == 0);

    BinaryMask single(4, 4, 0);
    single.set(0, 0, true);
    CHECK(downsample_to_latent(single, 2, 2) == BinaryMask(2, 2, {1, 0, 0, 0}));

    // Non-integral ratio: 5 -> 2 rows covers [0, 3) and [2, 5); row 2 feeds both.
    BinaryMask mid(5, 1, 0);
    mid.set(2, 0, true);
    CHECK(downsample_to_latent(mid, 2, 1) == BinaryMask(2, 1, {1, 1}));

    CHECK_THROWS_AS(downsample_to_latent(BinaryMask(4, 4), 5, 4), PreconditionError);
}

TEST_CASE("downsample_to_latent is monotone and keeps thin strokes") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const BinaryMask a = random_mask(rng, 17, 23, 0.1);
        std::vector<std::uint8_t> cells(a.cells().begin(), a.cells().end());
        std::bernoulli_distribution extra(0.1);
        for (auto& c : cells) c = static_cast<std::uint8_t>(c | (extra(rng) ? 1 : 0));
        const BinaryMask b(17, 23, cells);
        const BinaryMask pa = downsample_to_latent(a, 5, 6);
        const BinaryMask pb = downsample_to_latent(b, 5, 6);
        for (std::size_t k = 0; k < pa.cells().size(); ++k) CHECK(pa.cells()[k] <= pb.cells()[k]);
    }
    BinaryMask stroke(64, 64, 0);
    for (int y = 0; y < 64; ++y) stroke.set(y, 31, true);
    CHECK(downsample_to_latent(stroke, 8, 8).count() == 8);
}

TEST_CASE("naive_composite") {
    std::mt19937_64 rng(9);
    RasterImage bg(6, 4, 3);
    for (auto& v : bg.pixels()) v = std::uniform_real_distribution<double>(0, 1)(rng);

    SUBCASE("transparent foreground leaves the background") {
        const RasterImage fg(3, 2, 4, 0.0);
        CHECK(naive_composite(bg, fg, PixelBox{1, 1, 3, 2}) == bg);
    }
    SUBCASE("opaque full-canvas foreground replaces it") {
        RasterImage fg(6, 4, 4, 1.0);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 6; ++x) fg.at(x, y, 0) = 0.25;
        const RasterImage out = naive_composite(bg, fg, BoundingBox{0, 0, 1, 1});
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 6; ++x) {
                CHECK(out.at(x, y, 0) == 0.25);
                CHECK(out.at(x, y, 1) == 1.0);
            }
    }
    SUBCASE("single pixel paste matches the alpha-over oracle and nothing else changes") {
        RasterImage fg(1, 1, 4);
        const double px[4] = {0.9, 0.1, 0.3, 0.7};
        for (int c = 0; c < 4; ++c) fg.at(0, 0, c) = px[c];
        const RasterImage out = naive_composite(bg, fg, PixelBox{4, 2, 1, 1});
        double expected[3];
        const double under[3] = {bg.at(4, 2, 0), bg.at(4, 2, 1), bg.at(4, 2, 2)};
        oracle::alpha_over(px, under, expected);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 6; ++x)
                for (int c = 0; c < 3; ++c) {
                    if (x == 4 && y == 2) {
                        CHECK(out.at(x, y, c) == doctest::Approx(expected[c]).epsilon(1e-15));
                    } else {
                        CHECK(out.at(x, y, c) == bg.at(x, y, c));
                    }
                }
    }
    SUBCASE("foreground must match the box") {
        CHECK_THROWS_AS(naive_composite(bg, RasterImage(2, 2, 4), PixelBox{0, 0, 3, 3}), PreconditionError);
    }
}
