#pragma once

#include <string>

namespace tokencomp {

/// Element placement as fractions of the canvas size.
struct BoundingBox {
    double left = 0.0;
    double top = 0.0;
    double width = 1.0;
    double height = 1.0;

    bool operator==(const BoundingBox&) const = default;
};

/// Checks the box invariants (non-negative origin, positive extent, inside
/// the unit square up to `tolerance`). Returns an empty string when valid,
/// otherwise a short reason.
std::string validate_bbox(const BoundingBox& box, double tolerance = 1e-9);

/// Integer pixel rectangle, half-open: [x, x + width) x [y, y + height).
struct PixelBox {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool contains(int px, int py) const {
        return px >= x && px < x + width && py >= y && py < y + height;
    }
    bool operator==(const PixelBox&) const = default;
};

struct PixelBoxResult {
    PixelBox box;
    bool degenerate = false;  // a side rounded to zero and was clamped to 1 px
};

/// Origin is floor(left * W), floor(top * H); sizes are rounded and kept at
/// least 1 px, then clipped to the canvas.
PixelBoxResult to_pixel_box(const BoundingBox& box, int canvas_width, int canvas_height);

}  // namespace tokencomp
