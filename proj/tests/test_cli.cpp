#include "doctest.h"

#include "support.hpp"
#include "tokencomp/cli.hpp"
#include "tokencomp/config.hpp"
#include "tokencomp/errors.hpp"
#include "tokencomp/identity.hpp"
#include "tokencomp/image_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

using namespace tokencomp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

/// Fresh scratch directory holding a three-element design.
struct Workspace {
    fs::path root;

    explicit Workspace(const std::string& name) {
        root = fs::temp_directory_path() / ("tokencomp_cli_" + name);
        fs::remove_all(root);
        fs::create_directories(root);
        write_png(root / "bg.png", support::random_image(1, 48, 32));
        write_png(root / "photo.png", support::random_blob(2, 20, 20));
        spit(root / "logo.svg",
             R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10"><rect x="2" y="2" width="6" height="6" fill="#d04020"/></svg>)");
        spit(root / "design.json", R"({"canvas": {"width": 48, "height": 32}, "elements": [
            {"id": "bg", "kind": "background", "asset": "bg.png", "bbox": [0,0,1,1], "layer": 0},
            {"id": "photo", "kind": "image", "asset": "photo.png", "caption": "a blob", "bbox": [0.1,0.2,0.4,0.5], "layer": 1},
            {"id": "logo", "kind": "svg", "asset": "logo.svg", "bbox": [0.6,0.4,0.3,0.5], "layer": 2},
            {"id": "title", "kind": "text", "text": "Hi", "bbox": [0.1,0.8,0.5,0.1], "layer": 3}]})");
        spit(root / "config.json", R"({"scheduler": {"n_steps": 6}, "backend": {"latent_height": 4, "latent_width": 4}})");
    }
};

}  // namespace

TEST_CASE("config layering") {
    const PipelineConfig d = resolve_config({});
    CHECK(d.compose.injection.beta_fg == 0.3);
    CHECK(d.compose.injection.beta_bg == 0.2);
    CHECK(d.compose.injection.n_fg == 16);
    CHECK(d.compose.injection.n_bg == 8);
    CHECK(d.backend.mock.tokens == 64);
    CHECK(d.compose.scheduler.n_steps == 28);
    CHECK(d.compose.seed == 0);

    const PipelineConfig c = resolve_config({json{{"seed", 5}, {"injection", {{"n_fg", 3}}}}, json{{"seed", 9}}});
    CHECK(c.compose.seed == 9);
    CHECK(c.backend.mock.seed == 9);
    CHECK(c.compose.injection.n_fg == 3);

    // Round trip: the materialized config resolves to itself.
    CHECK(to_json(resolve_config({to_json(c)})) == to_json(c));
    CHECK(to_json(d)["scheduler"]["scoring_index"].is_null());

    CHECK_THROWS_WITH_AS(resolve_config({json{{"injection", {{"beta_fg", 2.0}}}}}), doctest::Contains("injection.beta_fg"),
                         ConfigError);
    CHECK_THROWS_AS(resolve_config({json{{"scheduler", {{"shape", "cosine"}}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({json{{"backend", {{"kind", "sdxl"}}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({json{{"injection", {{"n_fg", 65}}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({json{{"seed", "zero"}}}), ConfigError);
}

TEST_CASE("compose writes artifacts deterministically") {
    Workspace ws("compose");
    const ComposeArgs args{ws.root / "design.json", ws.root / "config.json", ws.root / "out", 4, true};
    REQUIRE(cmd_compose(args) == kExitOk);
    const std::string png = slurp(ws.root / "out" / "backing.png");
    const std::string manifest_text = slurp(ws.root / "out" / "manifest.json");
    const json manifest = json::parse(manifest_text);
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["config"]["seed"] == 4);
    CHECK(manifest["config"]["injection"]["n_fg"] == 16);
    CHECK(manifest["text_elements"].size() == 1);
    CHECK(manifest["trace"]["elements"].size() == 2);
    CHECK(manifest["sigma_grid"].size() == 7);
    CHECK(fs::exists(ws.root / "out" / "intermediates" / "step_00_photo.png"));
    CHECK(fs::exists(ws.root / "out" / "intermediates" / "step_01_logo.png"));

    // Replaying from the manifest's own config gives the same image.
    spit(ws.root / "replay.json", manifest["config"].dump());
    REQUIRE(cmd_compose({ws.root / "design.json", ws.root / "replay.json", ws.root / "out2", std::nullopt, false}) == kExitOk);
    CHECK(slurp(ws.root / "out2" / "backing.png") == png);

    REQUIRE(cmd_compose(args) == kExitOk);
    CHECK(slurp(ws.root / "out" / "backing.png") == png);
    CHECK(slurp(ws.root / "out" / "manifest.json") == manifest_text);

    REQUIRE(cmd_compose({ws.root / "design.json", ws.root / "config.json", ws.root / "out3", 5, false}) == kExitOk);
    CHECK(slurp(ws.root / "out3" / "backing.png") != png);
}

TEST_CASE("compose exit codes") {
    Workspace ws("errors");
    fs::remove(ws.root / "logo.svg");
    CHECK(cmd_compose({ws.root / "design.json", ws.root / "config.json", ws.root / "out", std::nullopt, false}) == kExitInput);
    const json partial = json::parse(slurp(ws.root / "out" / "manifest.json"));
    CHECK(partial["status"] == "failed");
    CHECK(partial["error"]["element_id"] == "logo");
    CHECK(partial["trace"]["elements"].size() == 1);

    spit(ws.root / "bad.json", R"({"canvas": {"width": 8, "height": 8}, "elements": []})");
    CHECK(cmd_compose({ws.root / "bad.json", {}, ws.root / "out", std::nullopt, false}) == kExitInput);
    spit(ws.root / "badcfg.json", R"({"injection": {"beta_bg": -1}})");
    CHECK(cmd_compose({ws.root / "design.json", ws.root / "badcfg.json", ws.root / "out", std::nullopt, false}) == kExitInput);
    CHECK(cmd_compose({ws.root / "missing.json", {}, ws.root / "out", std::nullopt, false}) == kExitInput);

    // A latent grid finer than the canvas is a backend contract failure.
    spit(ws.root / "fine.json", R"({"backend": {"latent_height": 64, "latent_width": 64}})");
    Workspace ok("errors_ok");
    CHECK(cmd_compose({ok.root / "design.json", ws.root / "fine.json", ws.root / "out", std::nullopt, false}) == kExitBackend);
}

TEST_CASE("probe exports relevance for the delta fixture") {
    Workspace ws("probe");
    spit(ws.root / "delta.json",
         R"({"backend": {"latent_height": 4, "latent_width": 4, "attention_fixture": "delta"}, "scheduler": {"n_steps": 4}})");
    const ProbeArgs args{ws.root / "design.json", ws.root / "delta.json", ws.root / "probe", "logo", std::nullopt};
    REQUIRE(cmd_probe(args) == kExitOk);
    const std::string csv = slurp(ws.root / "probe" / "relevance.csv");

    // Token i attends to latent cell i mod 16; the mask PNG says which cells are foreground.
    const RasterImage mask = read_png(ws.root / "probe" / "fg_mask.png");
    BinaryMask pixel(mask.height(), mask.width());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) pixel.set(y, x, mask.at(x, y, 0) > 0.5);
    const BinaryMask cells = downsample_to_latent(pixel, 4, 4);
    std::string expected = "token_index,r_fg,r_bg\n";
    for (int i = 0; i < 64; ++i) {
        const bool fg = cells.cells()[i % 16];
        expected += std::to_string(i) + (fg ? ",1,0\n" : ",0,1\n");
    }
    CHECK(csv == expected);

    int heatmaps = 0;
    for ([[maybe_unused]] const auto& f : fs::directory_iterator(ws.root / "probe" / "heatmaps")) ++heatmaps;
    CHECK(heatmaps == 64);
    const json sel = json::parse(slurp(ws.root / "probe" / "selection.json"));
    CHECK(sel["element_id"] == "logo");
    CHECK(sel["n_fg"] == 16);

    REQUIRE(cmd_probe(args) == kExitOk);
    CHECK(slurp(ws.root / "probe" / "relevance.csv") == csv);

    CHECK(cmd_probe({ws.root / "design.json", {}, ws.root / "probe", "nope", std::nullopt}) == kExitInput);
    CHECK(cmd_probe({ws.root / "design.json", {}, ws.root / "probe", "bg", std::nullopt}) == kExitInput);
}

TEST_CASE("eval") {
    Workspace ws("eval");
    write_png(ws.root / "a.png", support::random_image(7, 10, 10));
    write_png(ws.root / "b.png", support::random_image(8, 20, 10));
    spit(ws.root / "same.json", R"({"pairs": [{"foreground": "a.png", "composed": "a.png"}]})");
    REQUIRE(cmd_eval({ws.root / "same.json", {}, ws.root / "r1" / "report.json"}) == kExitOk);
    const json same = json::parse(slurp(ws.root / "r1" / "report.json"));
    CHECK(same["mean"]["cosine"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same["mean"]["manhattan"].get<double>() == 0.0);
    CHECK(fs::exists(ws.root / "r1" / "report.txt"));

    spit(ws.root / "crop.json", R"([{"foreground": "a.png", "composed": "b.png", "bbox": [0.5, 0, 0.5, 1]}])");
    REQUIRE(cmd_eval({ws.root / "crop.json", {}, ws.root / "r2.json"}) == kExitOk);
    const json cropped = json::parse(slurp(ws.root / "r2.json"));
    const RasterImage b = read_png(ws.root / "b.png");
    const ImagePair pair{read_png(ws.root / "a.png"), crop(b, PixelBox{10, 0, 10, 10})};
    const IdentityReport oracle = evaluate_pairs(std::span(&pair, 1), ReferenceEmbedder());
    CHECK(cropped["mean"]["cosine"].get<double>() == oracle.mean.cosine);
    CHECK(cropped["mean"]["euclidean"].get<double>() == oracle.mean.euclidean);

    spit(ws.root / "empty.json", R"({"pairs": []})");
    CHECK(cmd_eval({ws.root / "empty.json", {}, ws.root / "r3.json"}) == kExitInput);
    spit(ws.root / "broken.json", R"([{"foreground": "a.png"}])");
    CHECK(cmd_eval({ws.root / "broken.json", {}, ws.root / "r3.json"}) == kExitInput);
}
