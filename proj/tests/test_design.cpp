#include "doctest.h"

#include "tokencomp/design.hpp"
#include "tokencomp/errors.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>
#include <random>
#include <string>

using namespace tokencomp;

namespace {

std::string element(const std::string& id, const std::string& kind, int layer,
                    const std::string& bbox = "[0, 0, 1, 1]") {
    return fmt::format(R"({{"id": "{}", "kind": "{}", "asset": "{}.png", "bbox": {}, "layer": {}}})", id, kind, id,
                       bbox, layer);
}

std::string doc_with(const std::vector<std::string>& elements) {
    std::string body;
    for (std::size_t i = 0; i < elements.size(); ++i) body += (i ? "," : "") + elements[i];
    return R"({"canvas": {"width": 512, "height": 512}, "elements": [)" + body + "]}";
}

}  // namespace

TEST_CASE("minimal document loads") {
    const DesignDocument doc = load_design(doc_with({element("bg", "background", 0)}));
    CHECK(doc.canvas == Canvas{512, 512});
    REQUIRE(doc.elements.size() == 1);
    CHECK(doc.background().id == "bg");
    CHECK(foreground_elements(doc).empty());
}

TEST_CASE("elements are sorted by layer") {
    const DesignDocument doc = load_design(doc_with({element("c", "image", 3, "[0.1, 0.1, 0.2, 0.2]"),
                                                     element("a", "background", 1),
                                                     element("b", "svg", 2, "[0.5, 0.5, 0.5, 0.5]")}));
    std::vector<int> layers;
    for (const auto& e : doc.elements) layers.push_back(e.layer);
    CHECK(layers == std::vector<int>{1, 2, 3});
}

TEST_CASE("validation errors") {
    SUBCASE("multiple backgrounds") {
        CHECK_THROWS_WITH_AS(load_design(doc_with({element("a", "background", 0), element("b", "background", 1)})),
                             "multiple backgrounds", ValidationError);
    }
    SUBCASE("missing background") {
        CHECK_THROWS_AS(load_design(doc_with({element("a", "image", 0)})), ValidationError);
    }
    SUBCASE("duplicate layer") {
        CHECK_THROWS_AS(load_design(doc_with({element("a", "background", 0), element("b", "image", 0)})),
                        ValidationError);
    }
    SUBCASE("background must cover the canvas") {
        CHECK_THROWS_AS(load_design(doc_with({element("a", "background", 0, "[0, 0, 0.5, 1]")})), ValidationError);
    }
}

TEST_CASE("schema violations name the field") {
    CHECK_THROWS_WITH_AS(load_design(R"({"canvas": {"width": 10}, "elements": []})"),
                         doctest::Contains("'height'"), ParseError);
    CHECK_THROWS_WITH_AS(
        load_design(R"({"canvas": {"width": 10, "height": 10}, "elements": [{"id": "a", "kind": "background", "asset": "x", "bbox": [0,0,1], "layer": 0}]})"),
        doctest::Contains("'bbox'"), ParseError);
    CHECK_THROWS_WITH_AS(
        load_design(R"({"canvas": {"width": 10, "height": 10}, "elements": [{"id": "a", "kind": "sticker", "asset": "x", "bbox": [0,0,1,1], "layer": 0}]})"),
        doctest::Contains("'kind'"), ParseError);
    CHECK_THROWS_WITH_AS(
        load_design(R"({"canvas": {"width": 10, "height": 10}, "elements": [{"id": "a", "kind": "image", "asset": "x", "bbox": [0.8,0,0.5,1], "layer": 0}]})"),
        doctest::Contains("'bbox'"), ParseError);
    CHECK_THROWS_AS(load_design("{not json"), ParseError);
}

TEST_CASE("text elements pass through and unknown fields are ignored") {
    const std::string src = R"({"canvas": {"width": 64, "height": 32}, "extra": 1, "elements": [
        {"id": "bg", "kind": "background", "asset": "bg.png", "bbox": [0,0,1,1], "layer": 0, "note": "x"},
        {"id": "title", "kind": "text", "text": "Hello", "bbox": [0.1,0.1,0.5,0.2], "layer": 5},
        {"id": "logo", "kind": "svg", "asset": "logo.svg", "caption": "a logo", "alpha": "m.png", "bbox": [0.5,0.5,0.25,0.25], "layer": 2}]})";
    const DesignDocument doc = load_design(src);
    CHECK(doc.elements.size() == 2);
    REQUIRE(doc.text_elements.size() == 1);
    CHECK(doc.text_elements[0]["text"] == "Hello");
    const auto fgs = foreground_elements(doc);
    REQUIRE(fgs.size() == 1);
    CHECK(fgs[0].caption == "a logo");
    CHECK(fgs[0].alpha == "m.png");
}

TEST_CASE("foreground order matches a sort oracle on random layers") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> layers(6);
        std::iota(layers.begin(), layers.end(), 1);
        std::shuffle(layers.begin(), layers.end(), rng);
        std::vector<std::string> els{element("bg", "background", 0)};
        for (int i = 0; i < 5; ++i) {
            els.push_back(element("e" + std::to_string(i), i % 2 ? "svg" : "image", layers[i], "[0.25,0.25,0.5,0.5]"));
        }
        std::shuffle(els.begin(), els.end(), rng);
        const DesignDocument doc = load_design(doc_with(els));
        const auto fgs = foreground_elements(doc);
        CHECK(fgs.size() == doc.elements.size() - 1);
        std::vector<int> got;
        for (const auto& e : fgs) {
            CHECK(e.kind != ElementKind::background);
            got.push_back(e.layer);
        }
        std::vector<int> expected(layers.begin(), layers.begin() + 5);
        std::sort(expected.begin(), expected.end());
        CHECK(got == expected);
    }
}

TEST_CASE("load_design is idempotent on its serialized output") {
    const std::string src = R"({"canvas": {"width": 300, "height": 200}, "elements": [
        {"id": "t", "kind": "text", "text": "T", "layer": 9},
        {"id": "img", "kind": "image", "asset": "a.png", "bbox": [0.1, 0.2, 0.3, 0.4], "layer": 4},
        {"id": "bg", "kind": "background", "asset": "bg.png", "bbox": [0,0,1,1], "layer": 0},
        {"id": "s", "kind": "svg", "asset": "s.svg", "caption": "c", "bbox": [0.7, 0.7, 0.3, 0.3], "layer": 2}]})";
    const DesignDocument once = load_design(src);
    const DesignDocument twice = load_design(to_json(once).dump());
    CHECK(once == twice);
    CHECK(to_json(twice) == to_json(once));
}
