#include "tokencomp/adapter.hpp"

namespace tokencomp {

AttentionMap average_heads(const LayerAttention& layer) {
    if (layer.heads < 1) throw ContractError("attention layer has no heads");
    const std::size_t per_head = static_cast<std::size_t>(layer.tokens) * layer.height * layer.width;
    if (layer.values.size() != per_head * layer.heads) throw ContractError("attention layer buffer size mismatch");
    AttentionMap out(layer.tokens, layer.height, layer.width, 0.0);
    auto acc = out.values();
    for (int h = 0; h < layer.heads; ++h) {
        for (std::size_t k = 0; k < per_head; ++k) acc[k] += layer.values[h * per_head + k];
    }
    for (auto& v : acc) v /= layer.heads;
    return out;
}

}  // namespace tokencomp
