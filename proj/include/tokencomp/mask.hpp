#pragma once

#include "tokencomp/geometry.hpp"
#include "tokencomp/raster.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tokencomp {

/// H x W grid of {0, 1} cells, row-major.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int height, int width, std::uint8_t fill = 0);
    /// Throws ContractError when a cell is not 0 or 1 or the size is off.
    BinaryMask(int height, int width, std::vector<std::uint8_t> cells);

    int height() const { return height_; }
    int width() const { return width_; }

    std::uint8_t at(int row, int col) const { return cells_[static_cast<std::size_t>(row) * width_ + col]; }
    void set(int row, int col, bool on) { cells_[static_cast<std::size_t>(row) * width_ + col] = on ? 1 : 0; }

    std::span<const std::uint8_t> cells() const { return cells_; }
    std::size_t count() const;

    bool operator==(const BinaryMask&) const = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> cells_;
};

constexpr double kDefaultAlphaThreshold = 0.5;

/// cell = 1 iff alpha > threshold. Requires an RGBA image.
BinaryMask mask_from_alpha(const RasterImage& image, double threshold = kDefaultAlphaThreshold);

/// Ones on every cell whose centre lies in the pixel box of `bbox` on a
/// height x width grid. A box that rounds to zero area is widened to 1x1 and
/// logged.
BinaryMask mask_from_bbox(const BoundingBox& bbox, int height, int width);

BinaryMask complement(const BinaryMask& mask);

/// Max-pools onto an h_lat x w_lat grid. Each output cell covers the input
/// rows [floor(i*H/h), ceil((i+1)*H/h)) (likewise for columns), so ratios need
/// not be integral.
BinaryMask downsample_to_latent(const BinaryMask& mask, int h_lat, int w_lat);

/// Writes `local` (a mask over `box`) into an all-zero canvas-sized mask.
BinaryMask place_mask(const BinaryMask& local, const PixelBox& box, int canvas_height, int canvas_width);

/// Alpha-over of `foreground` (sized exactly to `box`) onto `background`.
/// Pixels outside `box` are copied unchanged. RGB foregrounds are opaque.
RasterImage naive_composite(const RasterImage& background, const RasterImage& foreground, const PixelBox& box);

/// Same, with the box derived from normalized coordinates on the background.
RasterImage naive_composite(const RasterImage& background, const RasterImage& foreground, const BoundingBox& bbox);

}  // namespace tokencomp
