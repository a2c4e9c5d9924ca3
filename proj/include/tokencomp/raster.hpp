#pragma once

#include "tokencomp/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tokencomp {

/// Row-major interleaved image with channel values in [0, 1]. Three channels
/// are RGB, four are straight (non-premultiplied) RGBA.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, int channels, double fill = 0.0);
    RasterImage(int width, int height, int channels, std::vector<double> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool has_alpha() const { return channels_ == 4; }
    bool empty() const { return pixels_.empty(); }

    double& at(int x, int y, int c) { return pixels_[index(x, y, c)]; }
    double at(int x, int y, int c) const { return pixels_[index(x, y, c)]; }

    std::span<double> pixels() { return pixels_; }
    std::span<const double> pixels() const { return pixels_; }

    /// Clamps every value into [0, 1].
    void clamp();
    bool all_finite() const;

    bool operator==(const RasterImage&) const = default;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> pixels_;
};

/// Bilinear resample with pixel-center alignment; keeps the channel count.
RasterImage resize_bilinear(const RasterImage& src, int width, int height);

/// Fits `src` into a width x height box preserving aspect ratio, centred,
/// with fully transparent letterbox bars. The result is always RGBA; RGB
/// sources become opaque inside the fitted area.
RasterImage fit_letterboxed(const RasterImage& src, int width, int height);

/// Drops alpha by compositing over a solid color (white by default).
RasterImage flatten_rgb(const RasterImage& src, double matte = 1.0);

/// Copies the pixels of `box`.
RasterImage crop(const RasterImage& src, const PixelBox& box);

/// Stable 64-bit content hash over dimensions and the exact bit pattern of
/// every value, rendered as 16 hex digits.
std::string checksum(const RasterImage& image);
std::string checksum_bytes(std::span<const std::uint8_t> bytes);

}  // namespace tokencomp
