#pragma once

#include "tokencomp/geometry.hpp"

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tokencomp {

struct Canvas {
    int width = 1;
    int height = 1;

    bool operator==(const Canvas&) const = default;
};

enum class ElementKind { background, image, svg };

std::string_view to_string(ElementKind kind);

struct DesignElement {
    std::string id;
    ElementKind kind = ElementKind::image;
    std::string asset;
    std::optional<std::string> caption;
    BoundingBox bbox;
    int layer = 0;
    std::optional<std::string> alpha;

    bool operator==(const DesignElement&) const = default;
};

/// A validated layered design. `elements` holds the background and the
/// visual foregrounds sorted by layer; text elements are kept verbatim in
/// `text_elements` for downstream typography.
struct DesignDocument {
    Canvas canvas;
    std::vector<DesignElement> elements;
    std::vector<nlohmann::json> text_elements;

    const DesignElement& background() const;
    const DesignElement* find(std::string_view id) const;

    bool operator==(const DesignDocument&) const = default;
};

/// Parses and validates design JSON. Schema problems raise ParseError naming
/// the field; duplicate layers, duplicate ids or a background count other
/// than one raise ValidationError. Unknown fields are logged and ignored.
DesignDocument load_design(std::string_view source);

nlohmann::json to_json(const DesignDocument& doc);

/// Non-background visual elements in ascending layer order.
std::vector<DesignElement> foreground_elements(const DesignDocument& doc);

}  // namespace tokencomp
