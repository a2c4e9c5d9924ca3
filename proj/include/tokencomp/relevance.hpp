#pragma once

#include "tokencomp/backend.hpp"
#include "tokencomp/mask.hpp"

#include <initializer_list>
#include <span>
#include <vector>

namespace tokencomp {

struct RelevanceScores {
    std::vector<double> fg;
    std::vector<double> bg;

    bool operator==(const RelevanceScores&) const = default;
};

/// Strictly increasing token indices.
class TokenIndexSet {
public:
    TokenIndexSet() = default;
    /// Throws ContractError unless `indices` is strictly increasing and non-negative.
    explicit TokenIndexSet(std::vector<int> indices);
    TokenIndexSet(std::initializer_list<int> indices) : TokenIndexSet(std::vector<int>(indices)) {}

    std::span<const int> indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(int i) const;

    TokenIndexSet without(const TokenIndexSet& other) const;

    bool operator==(const TokenIndexSet&) const = default;

private:
    std::vector<int> indices_;
};

/// Elementwise mean over layers.
AttentionMap aggregate_attention(const AttentionStack& stack);

/// r_fg[i] = max(CA[i] * m_fg) / max(CA[i]) and likewise for the background
/// mask. A token whose map is identically zero scores 0 in both.
RelevanceScores relevance(const AttentionMap& ca, const BinaryMask& fg_mask, const BinaryMask& bg_mask);

/// Indices of the n largest scores, ties to the lower index, ascending.
TokenIndexSet select_top(std::span<const double> scores, int n);

}  // namespace tokencomp
