// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include "oracles.hpp"
#include "support.hpp"
#include "tokencomp/assets.hpp"
#include "tokencomp/cli.hpp"
#include "tokencomp/compositor.hpp"
#include "tokencomp/identity.hpp"
#include "tokencomp/image_io.hpp"
#include "tokencomp/mock_backend.hpp"
#include "tokencomp/relevance.hpp"
#include "tokencomp/scheduler.hpp"

#include <chrono>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <numeric>
#include <spdlog/spdlog.h>
#include <sstream>

using namespace tokencomp;
namespace fs = std::filesystem;

namespace {

/// Collects failed checks for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok && failures.size() < 5) failures.push_back(what);
        else if (!ok) failures.back() = "... more failures";
    }
};

struct Criterion {
    int id;
    std::string name;
    std::function<void(Check&)> run;
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::fabs(a[k] - b[k]));
    return a.size() == b.size() ? worst : INFINITY;
}

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tokencomp_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void relevance_oracle(Check& chk) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::bernoulli_distribution on(0.35);
    constexpr int K = 64, H = 8, W = 8, L = 3;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        AttentionStack stack;
        std::vector<std::vector<double>> raw;
        for (int l = 0; l < L; ++l) {
            raw.push_back(oracle::random_vector(rng, static_cast<std::size_t>(K) * H * W, 0.0, 1.0));
            stack.layers.emplace_back(K, H, W, raw.back());
        }
        std::vector<std::uint8_t> cells(H * W);
        for (auto& c : cells) c = on(rng);
        const BinaryMask fg(H, W, cells);
        const BinaryMask bg = complement(fg);

        const AttentionMap ca = aggregate_attention(stack);
        const RelevanceScores s = relevance(ca, fg, bg);
        const auto mean = oracle::layer_mean(raw);
        const auto rf = oracle::masked_peak_ratio(mean, K, {fg.cells().begin(), fg.cells().end()});
        const auto rb = oracle::masked_peak_ratio(mean, K, {bg.cells().begin(), bg.cells().end()});
        const double err = std::max({max_abs_diff(ca.values(), mean), max_abs_diff(s.fg, rf), max_abs_diff(s.bg, rb)});
        worst = std::max(worst, err);
        chk.expect(err <= 1e-12, fmt::format("trial {}: oracle deviation {:.3g}", trial, err));
        for (int i = 0; i < K; ++i) {
            chk.expect(s.fg[i] >= 0.0 && s.fg[i] <= 1.0 && s.bg[i] >= 0.0 && s.bg[i] <= 1.0,
                       fmt::format("trial {}: score out of [0, 1]", trial));
        }

        const TokenIndexSet s_fg = select_top(s.fg, 16), s_bg = select_top(s.bg, 8);
        for (double lambda : {1e-3, 1.0, 1e3}) {
            AttentionStack scaled = stack;
            for (auto& layer : scaled.layers)
                for (auto& v : layer.values()) v *= lambda;
            const RelevanceScores r = relevance(aggregate_attention(scaled), fg, bg);
            chk.expect(select_top(r.fg, 16) == s_fg && select_top(r.bg, 8) == s_bg,
                       fmt::format("trial {}: selection changed under scale {}", trial, lambda));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    chk.expect(secs < 5.0, fmt::format("runtime {:.2f}s exceeds 5s", secs));
    chk.detail = fmt::format("200 stacks, max err {:.2g}, {:.2f}s", worst, secs);
}

void blend_contract(Check& chk) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr int K = 64, D = 16;
    auto subset = [&](double p) {
        std::vector<int> idx;
        for (int i = 0; i < K; ++i)
            if (u(rng) < p) idx.push_back(i);
        return TokenIndexSet(idx);
    };
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const TokenSet gen(K, D, TokenSource::generative, oracle::random_vector(rng, K * D, -3, 3));
        const TokenSet aut(K, D, TokenSource::identity, oracle::random_vector(rng, K * D, -3, 3));
        const TokenIndexSet s_fg = subset(0.3), s_bg = subset(0.2);
        const InjectionConfig cfg{.beta_fg = u(rng), .beta_bg = u(rng)};
        const TokenSet out = blend_tokens(gen, aut, s_fg, s_bg, cfg);
        for (int i = 0; i < K; ++i) {
            const bool in_bg = s_bg.contains(i), in_fg = s_fg.contains(i);
            for (int d = 0; d < D; ++d) {
                const double g = gen.row(i)[d], a = aut.row(i)[d], o = out.row(i)[d];
                if (!in_fg && !in_bg) {
                    chk.expect(o == g, fmt::format("trial {}: unselected row {} changed", trial, i));
                    continue;
                }
                const double beta = in_bg ? cfg.beta_bg : cfg.beta_fg;
                const double err = std::fabs(o - ((1.0 - beta) * g + beta * a));
                worst = std::max(worst, err);
                chk.expect(err <= 1e-12, fmt::format("trial {}: row {} off by {:.3g}", trial, i, err));
                chk.expect(o >= std::min(g, a) - 1e-12 && o <= std::max(g, a) + 1e-12,
                           fmt::format("trial {}: row {} outside the convex hull", trial, i));
            }
        }
        const TokenSet zero = blend_tokens(gen, aut, s_fg, s_bg, {.beta_fg = 0.0, .beta_bg = 0.0});
        chk.expect(as_vector(zero.values()) == as_vector(gen.values()), fmt::format("trial {}: beta=0 differs", trial));
        std::vector<int> all(K);
        std::iota(all.begin(), all.end(), 0);
        const TokenSet full = blend_tokens(gen, aut, TokenIndexSet(all), s_bg, {.beta_fg = 1.0, .beta_bg = 1.0});
        chk.expect(as_vector(full.values()) == as_vector(aut.values()), fmt::format("trial {}: full injection differs", trial));
    }
    const TokenSet gen(1, 2, TokenSource::generative, {1.0, 0.0});
    const TokenSet aut(1, 2, TokenSource::identity, {0.0, 1.0});
    const TokenSet overlap = blend_tokens(gen, aut, {0}, {0}, InjectionConfig{});
    chk.expect(std::fabs(overlap.row(0)[0] - 0.8) <= 1e-12 && std::fabs(overlap.row(0)[1] - 0.2) <= 1e-12,
               "overlap row is not (0.8, 0.2)");
    chk.detail = fmt::format("200 draws, max err {:.2g}, overlap ({}, {})", worst, overlap.row(0)[0], overlap.row(0)[1]);
}

void top_n(Check& chk) {
    std::mt19937_64 rng(303);
    int ties = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto scores = oracle::random_vector(rng, 64, 0.0, 1.0);
        if (trial % 3 == 1) {
            for (auto& s : scores) s = std::floor(s * 4.0) / 4.0;
            ++ties;
        } else if (trial % 3 == 2) {
            std::fill(scores.begin(), scores.end(), 0.5);
            ++ties;
        }
        const int n = static_cast<int>(rng() % 65);
        const auto expected = oracle::top_n_full_sort(scores, n);
        const TokenIndexSet got = select_top(scores, n);
        chk.expect(std::vector<int>(got.indices().begin(), got.indices().end()) == expected,
                   fmt::format("trial {} (n={}) differs from full sort", trial, n));
        chk.expect(select_top(scores, n) == got, fmt::format("trial {}: not deterministic", trial));
    }
    chk.detail = fmt::format("1000 vectors, {} with heavy ties", ties);
}

void scheduler(Check& chk) {
    for (int n : {1, 4, 8, 28}) {
        for (auto shape : {ScheduleShape::linear, ScheduleShape::shifted}) {
            const SigmaSchedule s = make_schedule(n, shape, 3.0);
            chk.expect(s.sigmas.front() == 1.0 && s.sigmas.back() == 0.0, fmt::format("endpoints for N={}", n));
        }
    }
    std::mt19937_64 rng(404);
    const LatentShape shape{4, 4, 12, 8, 8};
    double collinear = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Latent x0{shape, oracle::random_vector(rng, shape.size()), 0.0};
        const auto eps = oracle::random_vector(rng, shape.size());
        const double a = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
        const double b = a + 0.5;
        const auto xa = add_noise(x0, eps, a).values, xb = add_noise(x0, eps, b).values;
        const auto xm = add_noise(x0, eps, 0.5 * (a + b)).values;
        for (std::size_t k = 0; k < xm.size(); ++k) collinear = std::max(collinear, std::fabs(xm[k] - 0.5 * (xa[k] + xb[k])));
    }
    chk.expect(collinear <= 1e-12, fmt::format("add_noise collinearity error {:.3g}", collinear));

    const MockBackend backend({.latent_height = 4, .latent_width = 4});
    const TokenSet tokens = backend.encode_identity(support::random_image(5, 8, 8));
    const auto target = backend.target(tokens, shape);
    const Latent start{shape, seeded_noise(17, shape), 1.0};
    const Latent four = denoise(start, 0, make_schedule(4, ScheduleShape::linear), tokens, backend);
    const Latent eight = denoise(start, 0, make_schedule(8, ScheduleShape::linear), tokens, backend);
    const double closed = max_abs_diff(four.values, oracle::linear_flow_at_zero(target));
    const double steps = max_abs_diff(four.values, eight.values);
    chk.expect(closed <= 1e-9, fmt::format("closed-form error {:.3g}", closed));
    chk.expect(steps <= 1e-9, fmt::format("N=4 vs N=8 error {:.3g}", steps));
    chk.detail = fmt::format("collinearity {:.2g}, closed form {:.2g}, N4/N8 {:.2g}", collinear, closed, steps);
}

void latent_init(Check& chk) {
    double worst = 0.0;
    for (auto [side, grid] : {std::pair{8, 4}, std::pair{16, 8}}) {
        // D covers the whole latent, so the identity subspace is lossless.
        const MockBackend probe({.latent_height = grid, .latent_width = grid});
        const int dim = static_cast<int>(probe.latent_shape(side, side).size());
        const MockBackend backend({.token_dim = dim, .latent_height = grid, .latent_width = grid});
        for (auto shape : {ScheduleShape::linear, ScheduleShape::shifted}) {
            const SigmaSchedule schedule = make_schedule(28, shape);
            const double strength = schedule.sigmas[schedule.n_steps() - 1];
            const RasterImage canvas = support::random_image(side + grid, side, side);
            const TokenSet tokens = backend.encode_identity(canvas);
            const InvertedCanvas inv = invert_canvas(canvas, strength, schedule, 23, backend);
            const RasterImage out = backend.decode_latent(denoise(inv.latent, inv.start_index, schedule, tokens, backend));
            const double err = max_abs_diff(out.pixels(), canvas.pixels());
            worst = std::max(worst, err);
            chk.expect(err <= 1e-4, fmt::format("{}x{} canvas: max pixel error {:.3g}", side, side, err));
        }
    }
    chk.detail = fmt::format("max pixel error {:.2g}", worst);
}

void sequential_conditioning(Check& chk) {
    MemoryAssetStore assets;
    assets.put("bg", support::random_image(61, 48, 48));
    assets.put("a", support::random_blob(62, 20, 20));
    assets.put("b", support::random_image(63, 16, 12));
    assets.put("c", support::random_blob(64, 24, 24));
    DesignDocument doc;
    doc.canvas = {48, 48};
    auto add = [&](std::string id, ElementKind kind, BoundingBox box, int layer) {
        DesignElement e;
        e.id = id;
        e.asset = id;
        e.kind = kind;
        e.bbox = box;
        e.layer = layer;
        doc.elements.push_back(e);
    };
    add("bg", ElementKind::background, {}, 0);
    add("a", ElementKind::svg, {0.05, 0.05, 0.4, 0.4}, 1);
    add("b", ElementKind::image, {0.5, 0.1, 0.4, 0.3}, 2);
    add("c", ElementKind::svg, {0.3, 0.5, 0.5, 0.5}, 3);

    ComposeConfig cfg;
    cfg.scheduler.n_steps = 6;
    const MockBackend mock({.latent_height = 8, .latent_width = 8});
    support::RecordingBackend rec(mock);
    std::vector<RasterImage> canvases{render_background(doc, assets)};
    const CompositionResult result = compose_document(doc, cfg, rec, assets,
                                                      [&](std::size_t, const DesignElement&, const RasterImage& c) {
                                                          canvases.push_back(c);
                                                      });
    const auto identity = rec.calls("encode_identity");
    const auto prompts = rec.calls("generate_tokens");
    chk.expect(identity.size() == 3 && prompts.size() == 3 && result.trace.elements.size() == 3,
               "expected one identity encoding and one prompt per element");
    for (std::size_t k = 0; k < std::min<std::size_t>(identity.size(), 3); ++k) {
        const DesignElement& e = doc.elements[k + 1];
        const auto [box, degenerate] = to_pixel_box(e.bbox, 48, 48);
        const RasterImage fg = assets.render_fitted(e.asset, box.width, box.height).rgba;
        const std::string expected = checksum(naive_composite(canvases[k], fg, box));
        const std::string prev = checksum(canvases[k]);
        chk.expect(identity[k].input_checksum == expected,
                   fmt::format("element {}: identity input is not the composite over the post-{} canvas", e.id, k));
        chk.expect(prompts[k].input_checksum == prev, fmt::format("element {}: prompt canvas mismatch", e.id));
        chk.expect(result.trace.elements[k].injection.canvas_checksum == prev,
                   fmt::format("element {}: trace canvas checksum mismatch", e.id));
        if (k > 0) {
            chk.expect(prev != checksum(canvases[0]), fmt::format("element {}: canvas never changed", e.id));
        }
    }
    chk.detail = "3 elements, checksums threaded";
}

void svg_locality(Check& chk) {
    const fs::path dir = scratch("svg");
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const MockBackend backend({.latent_height = 8, .latent_width = 8});
    const FileAssetStore assets(dir);
    std::size_t changed_total = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::string name = fmt::format("shape_{}.svg", trial);
        std::ofstream(dir / name) << fmt::format(
            R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">)"
            R"(<circle cx="{:.1f}" cy="{:.1f}" r="{:.1f}" fill="#{:06x}"/>)"
            R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="#{:06x}"/></svg>)",
            20 + 60 * u(rng), 20 + 60 * u(rng), 8 + 20 * u(rng), rng() & 0xffffff, 10 * u(rng), 60 + 30 * u(rng),
            20 + 60 * u(rng), 10 * u(rng) + 2, rng() & 0xffffff);
        const int W = 24 + static_cast<int>(rng() % 40), H = 24 + static_cast<int>(rng() % 40);
        const double w = 0.2 + 0.6 * u(rng), h = 0.2 + 0.6 * u(rng);
        DesignElement e;
        e.id = fmt::format("svg{}", trial);
        e.kind = ElementKind::svg;
        e.asset = name;
        e.bbox = {(1.0 - w) * u(rng), (1.0 - h) * u(rng), w, h};
        ComposeConfig cfg;
        cfg.seed = trial;
        cfg.scheduler.n_steps = 4 + trial % 5;
        const RasterImage canvas = support::random_image(800 + trial, W, H);
        const ElementOutcome out = compose_element(canvas, e, cfg, backend, assets);
        std::size_t outside_diff = 0;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                for (int c = 0; c < 3; ++c) {
                    const bool same = out.canvas.at(x, y, c) == canvas.at(x, y, c);
                    if (!out.fg_mask.at(y, x) && !same) ++outside_diff;
                    if (out.fg_mask.at(y, x) && !same) ++changed_total;
                }
        chk.expect(outside_diff == 0, fmt::format("trial {}: {} values changed outside the mask", trial, outside_diff));
        chk.expect(out.record.mask_pixels > 0, fmt::format("trial {}: empty mask", trial));
    }
    chk.detail = fmt::format("20 placements, {} values updated inside masks", changed_total);
}

void cli_determinism(Check& chk) {
    const fs::path dir = scratch("cli");
    for (const auto& f : fs::directory_iterator(TOKENCOMP_EXAMPLES_DIR "/poster")) fs::copy(f.path(), dir / f.path().filename());
    const ComposeArgs args{dir / "design.json", dir / "config.json", dir / "out", std::nullopt, false};
    const int first = cmd_compose(args);
    const std::string png = slurp(dir / "out" / "backing.png"), manifest = slurp(dir / "out" / "manifest.json");
    const int second = cmd_compose(args);
    chk.expect(first == 0 && second == 0, fmt::format("exit codes {} and {}", first, second));
    chk.expect(!png.empty() && png == slurp(dir / "out" / "backing.png"), "backing.png differs between runs");
    chk.expect(!manifest.empty() && manifest == slurp(dir / "out" / "manifest.json"), "manifest.json differs between runs");
    chk.detail = fmt::format("backing.png {} bytes, manifest.json {} bytes", png.size(), manifest.size());
}

void ablation(Check& chk) {
    // Opaque warm foreground on a dark, textured cool background.
    RasterImage bg(16, 16, 3);
    RasterImage fg(8, 8, 3);
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.0, 0.15);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            bg.at(x, y, 0) = u(rng);
            bg.at(x, y, 1) = u(rng);
            bg.at(x, y, 2) = 0.35 + u(rng);
        }
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            fg.at(x, y, 0) = 0.95;
            fg.at(x, y, 1) = 0.45 + 0.05 * y;
            fg.at(x, y, 2) = 0.1 + 0.03 * x;
        }
    MemoryAssetStore assets;
    assets.put("bg", bg);
    assets.put("fg", fg);
    DesignDocument doc;
    doc.canvas = {16, 16};
    DesignElement background;
    background.id = "bg";
    background.asset = "bg";
    background.kind = ElementKind::background;
    DesignElement element;
    element.id = "tile";
    element.asset = "fg";
    element.kind = ElementKind::image;
    element.caption = "an orange tile";
    element.bbox = {0.25, 0.25, 0.5, 0.5};
    element.layer = 1;
    doc.elements = {background, element};

    const MockBackend probe({.latent_height = 8, .latent_width = 8});
    const int dim = static_cast<int>(probe.latent_shape(16, 16).size());
    const MockBackend backend({.seed = 3, .token_dim = dim, .latent_height = 8, .latent_width = 8});
    ComposeConfig cfg;
    cfg.seed = 3;
    cfg.scheduler.n_steps = 8;
    cfg.scheduler.strength = make_schedule(8, cfg.scheduler.shape).sigmas[7];

    const CompositionResult on = compose_document(doc, cfg, backend, assets);
    cfg.injection.enabled = false;
    const CompositionResult off = compose_document(doc, cfg, backend, assets);

    const InjectionTrace& trace = on.trace.elements.at(0).injection;
    chk.expect(!trace.s_fg.empty() || !trace.s_bg.empty(), "no tokens selected");
    chk.expect(checksum(on.backing) != checksum(off.backing), "enabled and disabled runs produce the same image");

    const PixelBox box = to_pixel_box(element.bbox, 16, 16).box;
    const ReferenceEmbedder embedder;
    const auto reference = embedder.embed(fg).values;
    const double cos_on = cosine_similarity(reference, embedder.embed(crop(on.backing, box)).values);
    const double cos_off = cosine_similarity(reference, embedder.embed(crop(off.backing, box)).values);
    chk.expect(cos_on >= cos_off, fmt::format("enabled cosine {:.4f} < disabled {:.4f}", cos_on, cos_off));
    chk.detail = fmt::format("cosine enabled {:.4f} vs disabled {:.4f} (reference direction 0.13 > 0.04)", cos_on,
                             cos_off);
}

void identity_metrics(Check& chk) {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 256;
        const auto a = oracle::random_vector(rng, n), b = oracle::random_vector(rng, n), c = oracle::random_vector(rng, n);
        const double cos = cosine_similarity(a, b), man = manhattan(a, b), euc = euclidean(a, b);
        const double err = std::max({std::fabs(cos - oracle::cosine(a, b)), std::fabs(man - oracle::l1(a, b)),
                                     std::fabs(euc - oracle::l2(a, b))});
        worst = std::max(worst, err);
        chk.expect(err <= 1e-9, fmt::format("pair {}: oracle deviation {:.3g}", trial, err));
        chk.expect(cos == cosine_similarity(b, a) && man == manhattan(b, a) && euc == euclidean(b, a),
                   fmt::format("pair {}: asymmetric", trial));
        chk.expect(manhattan(a, c) <= man + manhattan(b, c) + 1e-12, fmt::format("pair {}: Manhattan triangle", trial));
        chk.expect(euclidean(a, c) <= euc + euclidean(b, c) + 1e-12, fmt::format("pair {}: Euclidean triangle", trial));
        auto scaled = a;
        const double lambda = scale(rng);
        for (auto& v : scaled) v *= lambda;
        chk.expect(std::fabs(cosine_similarity(scaled, b) - cos) <= 1e-12, fmt::format("pair {}: cosine scale", trial));
        chk.expect(cos >= -1.0 && cos <= 1.0 && man >= 0.0 && euc >= 0.0, fmt::format("pair {}: range", trial));
    }
    chk.detail = fmt::format("1000 pairs, max err {:.2g}", worst);
}

}  // namespace

int main() {
    spdlog::set_level(std::getenv("ACCEPTANCE_VERBOSE") ? spdlog::level::debug : spdlog::level::err);
    const std::vector<Criterion> criteria{
        {1, "relevance scores match the brute-force oracle", relevance_oracle},
        {2, "token blend contract", blend_contract},
        {3, "top-N selection equals full sort", top_n},
        {4, "scheduler endpoints, affinity and Euler exactness", scheduler},
        {5, "latent-init round trip within 1e-4", latent_init},
        {6, "sequential conditioning through the canvas", sequential_conditioning},
        {7, "SVG paste-back locality", svg_locality},
        {8, "compose CLI is byte-deterministic", cli_determinism},
        {9, "injection ablation direction", ablation},
        {10, "identity metrics and axioms", identity_metrics},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Check chk;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(chk);
        } catch (const std::exception& e) {
            chk.failures.push_back(std::string("exception: ") + e.what());
        }
        spdlog::debug("criterion {} took {:.2f}s", c.id,
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        const bool ok = chk.failures.empty();
        failed += ok ? 0 : 1;
        fmt::print("{} [{:>2}] {}: {}\n", ok ? "PASS" : "FAIL", c.id, c.name, ok ? chk.detail : chk.failures.front());
        for (std::size_t k = 1; k < chk.failures.size(); ++k) fmt::print("          {}\n", chk.failures[k]);
    }
    fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
