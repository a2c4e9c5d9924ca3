#include "tokencomp/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tokencomp {

std::string validate_bbox(const BoundingBox& box, double tolerance) {
    if (!std::isfinite(box.left) || !std::isfinite(box.top) || !std::isfinite(box.width) ||
        !std::isfinite(box.height)) {
        return "non-finite coordinate";
    }
    if (box.left < 0.0 || box.top < 0.0) return "negative origin";
    if (box.width <= 0.0 || box.height <= 0.0) return "non-positive size";
    if (box.left + box.width > 1.0 + tolerance) return "left + width exceeds 1";
    if (box.top + box.height > 1.0 + tolerance) return "top + height exceeds 1";
    return {};
}

PixelBoxResult to_pixel_box(const BoundingBox& box, int canvas_width, int canvas_height) {
    PixelBoxResult out;
    int x = static_cast<int>(std::floor(box.left * canvas_width));
    int y = static_cast<int>(std::floor(box.top * canvas_height));
    auto w = static_cast<int>(std::lround(box.width * canvas_width));
    auto h = static_cast<int>(std::lround(box.height * canvas_height));
    if (w < 1 || h < 1) out.degenerate = true;
    w = std::max(w, 1);
    h = std::max(h, 1);
    x = std::clamp(x, 0, canvas_width - 1);
    y = std::clamp(y, 0, canvas_height - 1);
    w = std::min(w, canvas_width - x);
    h = std::min(h, canvas_height - y);
    out.box = PixelBox{x, y, w, h};
    return out;
}

}  // namespace tokencomp
