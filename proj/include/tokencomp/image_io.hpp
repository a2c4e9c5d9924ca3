#pragma once

#include "tokencomp/mask.hpp"
#include "tokencomp/raster.hpp"

#include <filesystem>
#include <span>

namespace tokencomp {

/// Reads an 8-bit PNG. Grayscale expands to RGB, gray+alpha to RGBA.
RasterImage read_png(const std::filesystem::path& path);

/// Writes 8-bit RGB or RGBA; values are clamped and rounded to the nearest code.
void write_png(const std::filesystem::path& path, const RasterImage& image);

/// Single-channel 8-bit PNG from values in [0, 1] (row-major).
void write_gray_png(const std::filesystem::path& path, int width, int height, std::span<const double> values);

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Rasterizes an SVG document into a width x height RGBA image, fitted with
/// preserved aspect ratio and centred. Uncovered pixels are transparent.
RasterImage rasterize_svg(const std::filesystem::path& path, int width, int height);

bool is_svg_path(const std::filesystem::path& path);

}  // namespace tokencomp
