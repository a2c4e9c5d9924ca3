#include "tokencomp/backend.hpp"

#include "tokencomp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tokencomp {

std::string_view to_string(TokenSource source) {
    switch (source) {
        case TokenSource::generative: return "generative";
        case TokenSource::identity: return "identity";
        case TokenSource::blended: return "blended";
    }
    return "unknown";
}

TokenSet::TokenSet(int count, int dim, TokenSource source, std::vector<double> values)
    : count_(count), dim_(dim), source_(source), values_(std::move(values)) {
    if (count < 1 || dim < 1) throw ContractError("token set dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(count) * dim) {
        throw ContractError("token buffer size does not match K x D");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw ContractError("token set contains non-finite entries");
    }
}

std::vector<double> TokenSet::mean() const {
    std::vector<double> m(dim_, 0.0);
    for (int i = 0; i < count_; ++i) {
        auto r = row(i);
        for (int d = 0; d < dim_; ++d) m[d] += r[d];
    }
    for (auto& v : m) v /= count_;
    return m;
}

AttentionMap::AttentionMap(int tokens, int height, int width, double fill)
    : tokens_(tokens), height_(height), width_(width) {
    if (tokens < 1 || height < 1 || width < 1) throw ContractError("attention map dimensions must be positive");
    values_.assign(static_cast<std::size_t>(tokens) * height * width, fill);
}

AttentionMap::AttentionMap(int tokens, int height, int width, std::vector<double> values)
    : AttentionMap(tokens, height, width) {
    if (values.size() != values_.size()) throw ContractError("attention buffer size does not match K x H x W");
    values_ = std::move(values);
}

}  // namespace tokencomp
