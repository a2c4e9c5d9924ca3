#pragma once

#include "tokencomp/backend.hpp"
#include "tokencomp/raster.hpp"

#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace support {

inline tokencomp::RasterImage random_image(std::uint64_t seed, int w, int h, int channels = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    tokencomp::RasterImage img(w, h, channels);
    for (auto& v : img.pixels()) v = u(rng);
    return img;
}

/// Random RGBA blob: opaque inside an ellipse, transparent elsewhere.
inline tokencomp::RasterImage random_blob(std::uint64_t seed, int w, int h) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    tokencomp::RasterImage img(w, h, 4, 0.0);
    const double cx = w * (0.3 + 0.4 * u(rng)), cy = h * (0.3 + 0.4 * u(rng));
    const double rx = w * (0.15 + 0.3 * u(rng)), ry = h * (0.15 + 0.3 * u(rng));
    const double color[3] = {u(rng), u(rng), u(rng)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
            if (dx * dx + dy * dy > 1.0) continue;
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = color[c];
            img.at(x, y, 3) = 1.0;
        }
    }
    return img;
}

struct Call {
    std::string op;
    std::string input_checksum;  // primary image argument, when there is one
};

/// Forwards to another backend and records every call with a checksum of
/// its image input.
class RecordingBackend final : public tokencomp::ModelBackend {
public:
    explicit RecordingBackend(const tokencomp::ModelBackend& inner) : inner_(inner) {}

    std::vector<Call> calls() const {
        std::lock_guard lock(mu_);
        return calls_;
    }
    std::vector<Call> calls(const std::string& op) const {
        std::vector<Call> out;
        for (const auto& c : calls())
            if (c.op == op) out.push_back(c);
        return out;
    }

    tokencomp::BackendInfo info() const override { return inner_.info(); }
    tokencomp::TokenSet encode_identity(const tokencomp::RasterImage& image) const override {
        record("encode_identity", tokencomp::checksum(image));
        return inner_.encode_identity(image);
    }
    tokencomp::TokenSet generate_tokens(const tokencomp::CompositionPrompt& prompt) const override {
        record("generate_tokens", tokencomp::checksum(prompt.background));
        return inner_.generate_tokens(prompt);
    }
    tokencomp::AttentionStack attention_probe(const tokencomp::TokenSet& tokens, const tokencomp::Latent& latent,
                                              double sigma) const override {
        record("attention_probe", std::string(tokencomp::to_string(tokens.source())));
        return inner_.attention_probe(tokens, latent, sigma);
    }
    tokencomp::Latent encode_latent(const tokencomp::RasterImage& image) const override {
        record("encode_latent", tokencomp::checksum(image));
        return inner_.encode_latent(image);
    }
    tokencomp::RasterImage decode_latent(const tokencomp::Latent& latent) const override {
        record("decode_latent", "");
        return inner_.decode_latent(latent);
    }
    std::vector<double> predict_velocity(const tokencomp::Latent& latent, double sigma,
                                         const tokencomp::TokenSet& tokens) const override {
        return inner_.predict_velocity(latent, sigma, tokens);
    }

private:
    void record(std::string op, std::string sum) const {
        std::lock_guard lock(mu_);
        calls_.push_back({std::move(op), std::move(sum)});
    }

    const tokencomp::ModelBackend& inner_;
    mutable std::mutex mu_;
    mutable std::vector<Call> calls_;
};

}  // namespace support
