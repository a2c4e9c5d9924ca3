#pragma once

#include "tokencomp/raster.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace tokencomp {

struct RenderedAsset {
    RasterImage rgba;           // always 4 channels
    bool has_alpha = false;     // source carried its own transparency
};

/// Source of element pixels. Implementations throw AssetError when a
/// reference cannot be resolved or decoded.
class AssetStore {
public:
    virtual ~AssetStore() = default;

    /// Fits the asset into width x height, aspect preserved and centred,
    /// transparent outside the fitted area.
    virtual RenderedAsset render_fitted(const std::string& ref, int width, int height) const = 0;

    /// Scales the asset to exactly width x height.
    virtual RenderedAsset render_stretched(const std::string& ref, int width, int height) const = 0;
};

/// PNG and SVG files resolved relative to a base directory.
class FileAssetStore final : public AssetStore {
public:
    explicit FileAssetStore(std::filesystem::path base_dir) : base_(std::move(base_dir)) {}

    RenderedAsset render_fitted(const std::string& ref, int width, int height) const override;
    RenderedAsset render_stretched(const std::string& ref, int width, int height) const override;

    std::filesystem::path resolve(const std::string& ref) const;

private:
    std::filesystem::path base_;
};

/// In-memory images keyed by reference; used by tests and embedding hosts.
class MemoryAssetStore final : public AssetStore {
public:
    void put(std::string ref, RasterImage image) { images_[std::move(ref)] = std::move(image); }

    RenderedAsset render_fitted(const std::string& ref, int width, int height) const override;
    RenderedAsset render_stretched(const std::string& ref, int width, int height) const override;

private:
    const RasterImage& get(const std::string& ref) const;

    std::map<std::string, RasterImage> images_;
};

}  // namespace tokencomp
