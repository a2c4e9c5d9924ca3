#include "tokencomp/mask.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <spdlog/spdlog.h>

namespace tokencomp {

BinaryMask::BinaryMask(int height, int width, std::uint8_t fill) : height_(height), width_(width) {
    if (height < 1 || width < 1) throw ContractError("mask dimensions must be positive");
    if (fill > 1) throw ContractError("mask cells must be 0 or 1");
    cells_.assign(static_cast<std::size_t>(height) * width, fill);
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint8_t> cells) : BinaryMask(height, width) {
    if (cells.size() != cells_.size()) throw ContractError("mask cell count does not match dimensions");
    if (std::any_of(cells.begin(), cells.end(), [](std::uint8_t c) { return c > 1; })) {
        throw ContractError("mask cells must be 0 or 1");
    }
    cells_ = std::move(cells);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

BinaryMask mask_from_alpha(const RasterImage& image, double threshold) {
    if (!image.has_alpha()) {
        throw PreconditionError("mask_from_alpha needs an RGBA image; use mask_from_bbox for opaque assets");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw PreconditionError("alpha threshold must lie in [0, 1]");
    BinaryMask mask(image.height(), image.width());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) mask.set(y, x, image.at(x, y, 3) > threshold);
    }
    return mask;
}

BinaryMask mask_from_bbox(const BoundingBox& bbox, int height, int width) {
    if (height < 1 || width < 1) throw PreconditionError("mask dimensions must be positive");
    if (auto why = validate_bbox(bbox); !why.empty()) throw PreconditionError("invalid bbox: " + why);
    auto [box, degenerate] = to_pixel_box(bbox, width, height);
    if (degenerate) {
        spdlog::warn("bbox rounds to zero area on a {}x{} grid; clamped to {}x{} px", width, height, box.width,
                     box.height);
    }
    BinaryMask mask(height, width);
    // Cell centres (x + 0.5) fall inside [box.x, box.x + width) exactly for
    // the integer cells box.x .. box.x + width - 1.
    for (int y = box.y; y < box.y + box.height; ++y) {
        for (int x = box.x; x < box.x + box.width; ++x) mask.set(y, x, true);
    }
    return mask;
}

BinaryMask complement(const BinaryMask& mask) {
    std::vector<std::uint8_t> cells(mask.cells().begin(), mask.cells().end());
    for (auto& c : cells) c = static_cast<std::uint8_t>(1 - c);
    return BinaryMask(mask.height(), mask.width(), std::move(cells));
}

BinaryMask downsample_to_latent(const BinaryMask& mask, int h_lat, int w_lat) {
    if (h_lat < 1 || w_lat < 1 || h_lat > mask.height() || w_lat > mask.width()) {
        throw PreconditionError("latent grid must be positive and no larger than the mask");
    }
    const int H = mask.height();
    const int W = mask.width();
    BinaryMask out(h_lat, w_lat);
    for (int i = 0; i < h_lat; ++i) {
        const int r0 = i * H / h_lat;
        const int r1 = ((i + 1) * H + h_lat - 1) / h_lat;
        for (int j = 0; j < w_lat; ++j) {
            const int c0 = j * W / w_lat;
            const int c1 = ((j + 1) * W + w_lat - 1) / w_lat;
            bool any = false;
            for (int r = r0; r < r1 && !any; ++r) {
                for (int c = c0; c < c1; ++c) {
                    if (mask.at(r, c)) {
                        any = true;
                        break;
                    }
                }
            }
            out.set(i, j, any);
        }
    }
    return out;
}

BinaryMask place_mask(const BinaryMask& local, const PixelBox& box, int canvas_height, int canvas_width) {
    if (local.height() != box.height || local.width() != box.width) {
        throw ContractError("local mask does not match its pixel box");
    }
    if (box.x < 0 || box.y < 0 || box.x + box.width > canvas_width || box.y + box.height > canvas_height) {
        throw ContractError("pixel box outside canvas");
    }
    BinaryMask out(canvas_height, canvas_width);
    for (int y = 0; y < box.height; ++y) {
        for (int x = 0; x < box.width; ++x) out.set(box.y + y, box.x + x, local.at(y, x) != 0);
    }
    return out;
}

RasterImage naive_composite(const RasterImage& background, const RasterImage& foreground, const PixelBox& box) {
    if (foreground.width() != box.width || foreground.height() != box.height) {
        throw PreconditionError("foreground must be resized to the pixel box before compositing");
    }
    if (box.x < 0 || box.y < 0 || box.x + box.width > background.width() ||
        box.y + box.height > background.height()) {
        throw PreconditionError("pixel box outside background");
    }
    RasterImage out = background;
    for (int y = 0; y < box.height; ++y) {
        for (int x = 0; x < box.width; ++x) {
            const double a = foreground.has_alpha() ? foreground.at(x, y, 3) : 1.0;
            if (a <= 0.0) continue;
            const int bx = box.x + x;
            const int by = box.y + y;
            for (int c = 0; c < 3; ++c) {
                out.at(bx, by, c) = a * foreground.at(x, y, c) + (1.0 - a) * background.at(bx, by, c);
            }
            if (out.has_alpha()) out.at(bx, by, 3) = a + (1.0 - a) * background.at(bx, by, 3);
        }
    }
    return out;
}

RasterImage naive_composite(const RasterImage& background, const RasterImage& foreground, const BoundingBox& bbox) {
    return naive_composite(background, foreground, to_pixel_box(bbox, background.width(), background.height()).box);
}

}  // namespace tokencomp
