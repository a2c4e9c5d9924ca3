#include "tokencomp/image_io.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <png.h>
#include <vector>

#define NANOSVG_IMPLEMENTATION
#include "nanosvg.h"
#define NANOSVGRAST_IMPLEMENTATION
#include "nanosvgrast.h"

namespace tokencomp {

namespace {

std::uint8_t quantize(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_png_raw(const std::filesystem::path& path, int width, int height, png_uint_32 format,
                   const std::vector<std::uint8_t>& bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw InputError("cannot write PNG '" + path.string() + "': " + msg);
    }
}

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw AssetError("cannot read PNG '" + path.string() + "': " + image.message);
    }
    const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw AssetError("cannot decode PNG '" + path.string() + "': " + msg);
    }
    const int channels = alpha ? 4 : 3;
    std::vector<double> pixels(buffer.size());
    std::transform(buffer.begin(), buffer.end(), pixels.begin(), [](std::uint8_t b) { return b / 255.0; });
    return RasterImage(static_cast<int>(image.width), static_cast<int>(image.height), channels, std::move(pixels));
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
    std::vector<std::uint8_t> bytes(image.pixels().size());
    std::transform(image.pixels().begin(), image.pixels().end(), bytes.begin(), quantize);
    write_png_raw(path, image.width(), image.height(), image.has_alpha() ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB, bytes);
}

void write_gray_png(const std::filesystem::path& path, int width, int height, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(width) * height) {
        throw ContractError("gray image buffer size mismatch");
    }
    std::vector<std::uint8_t> bytes(values.size());
    std::transform(values.begin(), values.end(), bytes.begin(), quantize);
    write_png_raw(path, width, height, PNG_FORMAT_GRAY, bytes);
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<double> values(mask.cells().begin(), mask.cells().end());
    write_gray_png(path, mask.width(), mask.height(), values);
}

bool is_svg_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".svg";
}

RasterImage rasterize_svg(const std::filesystem::path& path, int width, int height) {
    std::unique_ptr<NSVGimage, decltype(&nsvgDelete)> svg(nsvgParseFromFile(path.c_str(), "px", 96.0f),
                                                          &nsvgDelete);
    if (!svg) throw AssetError("cannot parse SVG '" + path.string() + "'");
    if (svg->width <= 0.0f || svg->height <= 0.0f) {
        throw AssetError("SVG '" + path.string() + "' has no usable size");
    }
    std::unique_ptr<NSVGrasterizer, decltype(&nsvgDeleteRasterizer)> rast(nsvgCreateRasterizer(),
                                                                           &nsvgDeleteRasterizer);
    const float scale = std::min(static_cast<float>(width) / svg->width, static_cast<float>(height) / svg->height);
    const float tx = (static_cast<float>(width) - svg->width * scale) * 0.5f;
    const float ty = (static_cast<float>(height) - svg->height * scale) * 0.5f;
    std::vector<unsigned char> rgba(static_cast<std::size_t>(width) * height * 4, 0);
    nsvgRasterize(rast.get(), svg.get(), tx, ty, scale, rgba.data(), width, height, width * 4);

    // nsvgRasterize un-premultiplies before returning: straight RGBA.
    std::vector<double> pixels(rgba.size());
    std::transform(rgba.begin(), rgba.end(), pixels.begin(), [](unsigned char b) { return b / 255.0; });
    return RasterImage(width, height, 4, std::move(pixels));
}

}  // namespace tokencomp
