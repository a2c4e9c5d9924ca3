#include "tokencomp/identity.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace tokencomp {

ReferenceEmbedder::ReferenceEmbedder(int grid) : grid_(grid) {
    if (grid < 1) throw ConfigError("embedder grid must be positive");
}

std::string ReferenceEmbedder::tag() const { return fmt::format("reference-{}x{}", grid_, grid_); }

EmbeddingVector ReferenceEmbedder::embed(const RasterImage& image) const {
    const RasterImage small = resize_bilinear(flatten_rgb(image), grid_, grid_);
    std::vector<double> v(small.pixels().size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = 2.0 * small.pixels()[k] - 1.0;
        norm2 += v[k] * v[k];
    }
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
    }
    return {std::move(v), tag()};
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("embedding lengths differ");
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw InputError("cosine similarity is undefined for a zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double manhattan(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

IdentityReport evaluate_pairs(std::span<const ImagePair> pairs, const Embedder& embedder) {
    if (pairs.empty()) throw InputError("identity evaluation needs at least one pair");
    IdentityReport report;
    report.embedder_tag = embedder.tag();
    for (const auto& [fg, composed] : pairs) {
        const EmbeddingVector a = embedder.embed(fg);
        const EmbeddingVector b = embedder.embed(composed);
        PairMetrics m{cosine_similarity(a.values, b.values), manhattan(a.values, b.values),
                      euclidean(a.values, b.values)};
        report.mean.cosine += m.cosine;
        report.mean.manhattan += m.manhattan;
        report.mean.euclidean += m.euclidean;
        report.pairs.push_back(m);
    }
    const auto n = static_cast<double>(report.pairs.size());
    report.mean.cosine /= n;
    report.mean.manhattan /= n;
    report.mean.euclidean /= n;
    return report;
}

nlohmann::json to_json(const IdentityReport& report) {
    auto row = [](const PairMetrics& m) {
        return nlohmann::json{{"cosine", m.cosine}, {"manhattan", m.manhattan}, {"euclidean", m.euclidean}};
    };
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& m : report.pairs) pairs.push_back(row(m));
    return {{"embedder", report.embedder_tag}, {"pairs", pairs}, {"mean", row(report.mean)}};
}

std::string format_table(const IdentityReport& report) {
    std::string out = fmt::format("{:<10} {:>14} {:>14} {:>14}\n", "Pair", "Cos. Sim. ^", "Manhattan v", "Euclidean v");
    auto line = [&](const std::string& label, const PairMetrics& m) {
        out += fmt::format("{:<10} {:>14.6f} {:>14.6f} {:>14.6f}\n", label, m.cosine, m.manhattan, m.euclidean);
    };
    for (std::size_t i = 0; i < report.pairs.size(); ++i) line(std::to_string(i), report.pairs[i]);
    line("mean", report.mean);
    return out;
}

}  // namespace tokencomp
