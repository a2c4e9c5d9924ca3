#include "tokencomp/raster.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fmt/format.h>

namespace tokencomp {

RasterImage::RasterImage(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1) throw ContractError("image dimensions must be positive");
    if (channels != 3 && channels != 4) throw ContractError("image must have 3 or 4 channels");
    pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<double> pixels)
    : RasterImage(width, height, channels) {
    if (pixels.size() != pixels_.size()) throw ContractError("pixel buffer size does not match dimensions");
    pixels_ = std::move(pixels);
}

void RasterImage::clamp() {
    for (auto& v : pixels_) v = std::clamp(v, 0.0, 1.0);
}

bool RasterImage::all_finite() const {
    return std::all_of(pixels_.begin(), pixels_.end(), [](double v) { return std::isfinite(v); });
}

RasterImage resize_bilinear(const RasterImage& src, int width, int height) {
    if (src.width() == width && src.height() == height) return src;
    RasterImage out(width, height, src.channels());
    const double sx = static_cast<double>(src.width()) / width;
    const double sy = static_cast<double>(src.height()) / height;
    for (int y = 0; y < height; ++y) {
        double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, src.height() - 1.0);
        int y0 = static_cast<int>(fy);
        int y1 = std::min(y0 + 1, src.height() - 1);
        double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, src.width() - 1.0);
            int x0 = static_cast<int>(fx);
            int x1 = std::min(x0 + 1, src.width() - 1);
            double wx = fx - x0;
            for (int c = 0; c < src.channels(); ++c) {
                double top = src.at(x0, y0, c) * (1.0 - wx) + src.at(x1, y0, c) * wx;
                double bottom = src.at(x0, y1, c) * (1.0 - wx) + src.at(x1, y1, c) * wx;
                out.at(x, y, c) = top * (1.0 - wy) + bottom * wy;
            }
        }
    }
    return out;
}

RasterImage fit_letterboxed(const RasterImage& src, int width, int height) {
    const double scale = std::min(static_cast<double>(width) / src.width(),
                                  static_cast<double>(height) / src.height());
    int fit_w = std::clamp(static_cast<int>(std::lround(src.width() * scale)), 1, width);
    int fit_h = std::clamp(static_cast<int>(std::lround(src.height() * scale)), 1, height);
    RasterImage scaled = resize_bilinear(src, fit_w, fit_h);
    RasterImage out(width, height, 4, 0.0);
    const int ox = (width - fit_w) / 2;
    const int oy = (height - fit_h) / 2;
    for (int y = 0; y < fit_h; ++y) {
        for (int x = 0; x < fit_w; ++x) {
            for (int c = 0; c < 3; ++c) out.at(ox + x, oy + y, c) = scaled.at(x, y, c);
            out.at(ox + x, oy + y, 3) = scaled.has_alpha() ? scaled.at(x, y, 3) : 1.0;
        }
    }
    return out;
}

RasterImage flatten_rgb(const RasterImage& src, double matte) {
    if (!src.has_alpha()) return src;
    RasterImage out(src.width(), src.height(), 3);
    for (int y = 0; y < src.height(); ++y) {
        for (int x = 0; x < src.width(); ++x) {
            double a = src.at(x, y, 3);
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = a * src.at(x, y, c) + (1.0 - a) * matte;
        }
    }
    return out;
}

RasterImage crop(const RasterImage& src, const PixelBox& box) {
    if (box.x < 0 || box.y < 0 || box.width < 1 || box.height < 1 || box.x + box.width > src.width() ||
        box.y + box.height > src.height()) {
        throw ContractError("crop box outside image");
    }
    RasterImage out(box.width, box.height, src.channels());
    for (int y = 0; y < box.height; ++y) {
        for (int x = 0; x < box.width; ++x) {
            for (int c = 0; c < src.channels(); ++c) out.at(x, y, c) = src.at(box.x + x, box.y + y, c);
        }
    }
    return out;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_update(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

}  // namespace

std::string checksum(const RasterImage& image) {
    std::uint64_t h = kFnvOffset;
    const std::int32_t dims[3] = {image.width(), image.height(), image.channels()};
    fnv_update(h, dims, sizeof(dims));
    for (double v : image.pixels()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        fnv_update(h, &bits, sizeof(bits));
    }
    return fmt::format("{:016x}", h);
}

std::string checksum_bytes(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = kFnvOffset;
    fnv_update(h, bytes.data(), bytes.size());
    return fmt::format("{:016x}", h);
}

}  // namespace tokencomp
