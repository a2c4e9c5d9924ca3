#include "tokencomp/assets.hpp"

#include "tokencomp/errors.hpp"
#include "tokencomp/image_io.hpp"

namespace tokencomp {

namespace {

RasterImage to_rgba(const RasterImage& image) {
    if (image.has_alpha()) return image;
    RasterImage out(image.width(), image.height(), 4, 1.0);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(x, y, c);
        }
    }
    return out;
}

}  // namespace

std::filesystem::path FileAssetStore::resolve(const std::string& ref) const {
    std::filesystem::path p(ref);
    return p.is_absolute() ? p : base_ / p;
}

RenderedAsset FileAssetStore::render_fitted(const std::string& ref, int width, int height) const {
    const auto path = resolve(ref);
    if (!std::filesystem::is_regular_file(path)) throw AssetError("asset not found: " + path.string());
    if (is_svg_path(path)) return {rasterize_svg(path, width, height), true};
    RasterImage image = read_png(path);
    const bool alpha = image.has_alpha();
    return {fit_letterboxed(image, width, height), alpha};
}

RenderedAsset FileAssetStore::render_stretched(const std::string& ref, int width, int height) const {
    const auto path = resolve(ref);
    if (!std::filesystem::is_regular_file(path)) throw AssetError("asset not found: " + path.string());
    if (is_svg_path(path)) return {rasterize_svg(path, width, height), true};
    RasterImage image = read_png(path);
    const bool alpha = image.has_alpha();
    return {to_rgba(resize_bilinear(image, width, height)), alpha};
}

const RasterImage& MemoryAssetStore::get(const std::string& ref) const {
    auto it = images_.find(ref);
    if (it == images_.end()) throw AssetError("asset not found: " + ref);
    return it->second;
}

RenderedAsset MemoryAssetStore::render_fitted(const std::string& ref, int width, int height) const {
    const RasterImage& image = get(ref);
    return {fit_letterboxed(image, width, height), image.has_alpha()};
}

RenderedAsset MemoryAssetStore::render_stretched(const std::string& ref, int width, int height) const {
    const RasterImage& image = get(ref);
    return {to_rgba(resize_bilinear(image, width, height)), image.has_alpha()};
}

}  // namespace tokencomp
