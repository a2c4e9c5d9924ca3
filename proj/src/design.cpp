#include "tokencomp/design.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <set>
#include <spdlog/spdlog.h>

namespace tokencomp {

using nlohmann::json;

std::string_view to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::background: return "background";
        case ElementKind::image: return "image";
        case ElementKind::svg: return "svg";
    }
    return "unknown";
}

const DesignElement& DesignDocument::background() const {
    for (const auto& e : elements) {
        if (e.kind == ElementKind::background) return e;
    }
    throw ValidationError("document has no background element");
}

const DesignElement* DesignDocument::find(std::string_view id) const {
    for (const auto& e : elements) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

namespace {

void warn_unknown(const json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            spdlog::warn("ignoring unknown field '{}' in {}", key, where);
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(fmt::format("{}: missing field '{}'", where, key));
    return *it;
}

int require_int(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_integer()) throw ParseError(fmt::format("{}: field '{}' must be an integer", where, key));
    return v.get<int>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) throw ParseError(fmt::format("{}: field '{}' must be a string", where, key));
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(fmt::format("{}: field '{}' must be a string", where, key));
    return it->get<std::string>();
}

BoundingBox parse_bbox(const json& obj, const std::string& where) {
    const json& v = require(obj, "bbox", where);
    if (!v.is_array() || v.size() != 4 ||
        !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
        throw ParseError(fmt::format("{}: field 'bbox' must be [left, top, width, height] numbers", where));
    }
    BoundingBox box{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
    if (auto why = validate_bbox(box); !why.empty()) {
        throw ParseError(fmt::format("{}: field 'bbox' invalid ({})", where, why));
    }
    // Absorb JSON rounding so left + width never exceeds 1 downstream.
    box.width = std::min(box.width, 1.0 - box.left);
    box.height = std::min(box.height, 1.0 - box.top);
    return box;
}

}  // namespace

DesignDocument load_design(std::string_view source) {
    json root;
    try {
        root = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("design: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("design: root must be an object");
    warn_unknown(root, {"canvas", "elements"}, "design");

    DesignDocument doc;
    const json& canvas = require(root, "canvas", "design");
    if (!canvas.is_object()) throw ParseError("design: field 'canvas' must be an object");
    warn_unknown(canvas, {"width", "height"}, "canvas");
    doc.canvas.width = require_int(canvas, "width", "canvas");
    doc.canvas.height = require_int(canvas, "height", "canvas");
    if (doc.canvas.width < 1) throw ParseError("canvas: field 'width' must be >= 1");
    if (doc.canvas.height < 1) throw ParseError("canvas: field 'height' must be >= 1");

    const json& elements = require(root, "elements", "design");
    if (!elements.is_array()) throw ParseError("design: field 'elements' must be an array");
    if (elements.empty()) throw ValidationError("design: at least one element is required");

    std::set<int> layers;
    std::set<std::string> ids;
    int backgrounds = 0;
    std::vector<std::pair<int, json>> texts;
    for (std::size_t n = 0; n < elements.size(); ++n) {
        const json& el = elements[n];
        const std::string where = fmt::format("elements[{}]", n);
        if (!el.is_object()) throw ParseError(where + ": must be an object");
        const std::string id = require_string(el, "id", where);
        const std::string kind = require_string(el, "kind", where);
        const int layer = require_int(el, "layer", where);
        if (!ids.insert(id).second) throw ValidationError(fmt::format("duplicate element id '{}'", id));
        if (!layers.insert(layer).second) {
            throw ValidationError(fmt::format("duplicate layer {} (element '{}')", layer, id));
        }
        if (kind == "text") {
            texts.emplace_back(layer, el);
            continue;
        }
        warn_unknown(el, {"id", "kind", "asset", "caption", "bbox", "layer", "alpha"}, where);
        DesignElement e;
        e.id = id;
        e.layer = layer;
        if (kind == "background") {
            e.kind = ElementKind::background;
            ++backgrounds;
        } else if (kind == "image") {
            e.kind = ElementKind::image;
        } else if (kind == "svg") {
            e.kind = ElementKind::svg;
        } else {
            throw ParseError(fmt::format("{}: field 'kind' has unknown value '{}'", where, kind));
        }
        e.asset = require_string(el, "asset", where);
        e.caption = optional_string(el, "caption", where);
        e.alpha = optional_string(el, "alpha", where);
        e.bbox = parse_bbox(el, where);
        if (e.kind == ElementKind::background && e.bbox != BoundingBox{}) {
            const BoundingBox& b = e.bbox;
            constexpr double tol = 1e-9;
            if (b.left > tol || b.top > tol || b.width < 1.0 - tol || b.height < 1.0 - tol) {
                throw ValidationError(fmt::format("background '{}' must cover the full canvas", id));
            }
            e.bbox = BoundingBox{};
        }
        doc.elements.push_back(std::move(e));
    }
    if (backgrounds == 0) throw ValidationError("missing background");
    if (backgrounds > 1) throw ValidationError("multiple backgrounds");

    std::sort(doc.elements.begin(), doc.elements.end(),
              [](const DesignElement& a, const DesignElement& b) { return a.layer < b.layer; });
    std::sort(texts.begin(), texts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, t] : texts) doc.text_elements.push_back(std::move(t));
    return doc;
}

json to_json(const DesignDocument& doc) {
    json elements = json::array();
    for (const auto& e : doc.elements) {
        json j = {{"id", e.id},
                  {"kind", to_string(e.kind)},
                  {"asset", e.asset},
                  {"bbox", {e.bbox.left, e.bbox.top, e.bbox.width, e.bbox.height}},
                  {"layer", e.layer}};
        if (e.caption) j["caption"] = *e.caption;
        if (e.alpha) j["alpha"] = *e.alpha;
        elements.push_back(std::move(j));
    }
    for (const auto& t : doc.text_elements) elements.push_back(t);
    return {{"canvas", {{"width", doc.canvas.width}, {"height", doc.canvas.height}}}, {"elements", elements}};
}

std::vector<DesignElement> foreground_elements(const DesignDocument& doc) {
    std::vector<DesignElement> out;
    for (const auto& e : doc.elements) {
        if (e.kind != ElementKind::background) out.push_back(e);
    }
    return out;
}

}  // namespace tokencomp
