#pragma once

#include "tokencomp/raster.hpp"

#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tokencomp {

struct EmbeddingVector {
    std::vector<double> values;
    std::string embedder_tag;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::string tag() const = 0;
    virtual EmbeddingVector embed(const RasterImage& image) const = 0;
};

/// Flattens alpha over white, bilinearly resamples to grid x grid RGB, maps
/// values to [-1, 1] and L2-normalizes. A zero vector (exact mid-gray input)
/// is returned unnormalized.
class ReferenceEmbedder final : public Embedder {
public:
    explicit ReferenceEmbedder(int grid = 16);

    std::string tag() const override;
    EmbeddingVector embed(const RasterImage& image) const override;

private:
    int grid_;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);
double euclidean(std::span<const double> a, std::span<const double> b);

struct PairMetrics {
    double cosine = 0.0;
    double manhattan = 0.0;
    double euclidean = 0.0;
};

struct IdentityReport {
    std::string embedder_tag;
    std::vector<PairMetrics> pairs;
    PairMetrics mean;
};

using ImagePair = std::pair<RasterImage, RasterImage>;  // (input foreground, composed crop)

/// Per-pair metrics between embeddings plus their arithmetic means.
IdentityReport evaluate_pairs(std::span<const ImagePair> pairs, const Embedder& embedder);

nlohmann::json to_json(const IdentityReport& report);

/// Aligned text table: one row per pair and a final mean row.
std::string format_table(const IdentityReport& report);

}  // namespace tokencomp
