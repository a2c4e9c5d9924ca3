#include "tokencomp/relevance.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <numeric>

namespace tokencomp {

TokenIndexSet::TokenIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] < 0) throw ContractError("token index must be non-negative");
        if (k > 0 && indices_[k] <= indices_[k - 1]) throw ContractError("token indices must be strictly increasing");
    }
}

bool TokenIndexSet::contains(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

TokenIndexSet TokenIndexSet::without(const TokenIndexSet& other) const {
    std::vector<int> out;
    std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                        std::back_inserter(out));
    return TokenIndexSet(std::move(out));
}

AttentionMap aggregate_attention(const AttentionStack& stack) {
    if (stack.layers.empty()) throw ContractError("aggregate_attention: empty attention stack");
    const AttentionMap& first = stack.layers.front();
    AttentionMap out(first.tokens(), first.height(), first.width(), 0.0);
    for (const auto& layer : stack.layers) {
        if (layer.tokens() != first.tokens() || layer.height() != first.height() || layer.width() != first.width()) {
            throw ContractError("aggregate_attention: layers disagree on K, H_lat or W_lat");
        }
        auto acc = out.values();
        auto src = layer.values();
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += src[k];
    }
    const auto L = static_cast<double>(stack.layers.size());
    for (auto& v : out.values()) v /= L;
    return out;
}

RelevanceScores relevance(const AttentionMap& ca, const BinaryMask& fg_mask, const BinaryMask& bg_mask) {
    for (const BinaryMask* m : {&fg_mask, &bg_mask}) {
        if (m->height() != ca.height() || m->width() != ca.width()) {
            throw ContractError("relevance: mask shape differs from the attention grid");
        }
    }
    const auto fg = fg_mask.cells();
    const auto bg = bg_mask.cells();
    RelevanceScores scores{std::vector<double>(ca.tokens(), 0.0), std::vector<double>(ca.tokens(), 0.0)};
    for (int i = 0; i < ca.tokens(); ++i) {
        const auto map = ca.token(i);
        double peak = 0.0;
        double peak_fg = 0.0;
        double peak_bg = 0.0;
        for (std::size_t c = 0; c < map.size(); ++c) {
            const double v = map[c];
            if (v < 0.0) throw ContractError("relevance: attention entries must be non-negative");
            peak = std::max(peak, v);
            if (fg[c]) peak_fg = std::max(peak_fg, v);
            if (bg[c]) peak_bg = std::max(peak_bg, v);
        }
        if (peak > 0.0) {
            scores.fg[i] = peak_fg / peak;
            scores.bg[i] = peak_bg / peak;
        }
    }
    return scores;
}

TokenIndexSet select_top(std::span<const double> scores, int n) {
    if (n < 0 || static_cast<std::size_t>(n) > scores.size()) {
        throw ContractError("select_top: n must lie in [0, K]");
    }
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + n, order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    order.resize(static_cast<std::size_t>(n));
    std::sort(order.begin(), order.end());
    return TokenIndexSet(std::move(order));
}

}  // namespace tokencomp
