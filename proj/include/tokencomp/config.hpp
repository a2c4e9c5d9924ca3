#pragma once

#include "tokencomp/compositor.hpp"
#include "tokencomp/identity.hpp"
#include "tokencomp/mock_backend.hpp"

#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>

namespace tokencomp {

struct BackendConfig {
    std::string kind = "mock";
    MockOptions mock;
};

struct EmbedderConfig {
    std::string kind = "reference";
    int grid = 16;
};

struct PipelineConfig {
    BackendConfig backend;
    ComposeConfig compose;
    EmbedderConfig embedder;
    bool debug_intermediates = false;
};

/// Fully materialized configuration, every default written out.
nlohmann::json to_json(const PipelineConfig& cfg);

/// Built-in defaults, then each layer merged on top (RFC 7386 merge patch).
/// Unknown keys are logged; wrong types or out-of-range values raise
/// ConfigError naming the key.
PipelineConfig resolve_config(std::initializer_list<nlohmann::json> layers);

/// Reads a JSON config file as one layer. An empty path yields {}.
nlohmann::json read_config_layer(const std::filesystem::path& path);

std::unique_ptr<ModelBackend> make_backend(const PipelineConfig& cfg);
std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& cfg);

}  // namespace tokencomp
