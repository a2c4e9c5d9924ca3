#include "tokencomp/mock_backend.hpp"

#include "tokencomp/errors.hpp"
#include "tokencomp/keyed_mix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <spdlog/spdlog.h>

namespace tokencomp {

double CounterStream::normal(std::uint64_t n) const {
    const double u1 = 1.0 - uniform(2 * n);  // (0, 1]
    const double u2 = uniform(2 * n + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

AttentionFixture attention_fixture_from_string(const std::string& name) {
    if (name == "keyed") return AttentionFixture::keyed;
    if (name == "delta") return AttentionFixture::delta;
    throw ConfigError("unknown attention fixture '" + name + "' (expected keyed or delta)");
}

std::string_view to_string(AttentionFixture fixture) {
    return fixture == AttentionFixture::delta ? "delta" : "keyed";
}

namespace {

struct BlockSpan {
    int begin;
    int end;
};

BlockSpan block_span(int index, int extent, int blocks) {
    return {index * extent / blocks, (index + 1) * extent / blocks};
}

void absorb_image(KeyedDigest& digest, const RasterImage& image) {
    digest.absorb(std::int64_t{image.width()}).absorb(std::int64_t{image.height()});
    digest.absorb(std::int64_t{image.channels()}).absorb(image.pixels());
}

void require_finite(const RasterImage& image, const char* op) {
    if (!image.all_finite()) throw InputError(std::string(op) + ": image contains non-finite pixels");
}

}  // namespace

MockBackend::MockBackend(MockOptions options) : options_(options) {
    if (options_.tokens < 1 || options_.token_dim < 1 || options_.latent_height < 1 || options_.latent_width < 1 ||
        options_.attention_layers < 1) {
        throw ConfigError("mock backend dimensions must be positive");
    }
    if (!(options_.sigma_min > 0.0)) throw ConfigError("mock sigma_min must be positive");
}

BackendInfo MockBackend::info() const {
    return {"mock", options_.tokens, options_.token_dim, options_.latent_height, options_.latent_width,
            options_.attention_layers};
}

LatentShape MockBackend::latent_shape(int pixel_width, int pixel_height) const {
    const int h = options_.latent_height;
    const int w = options_.latent_width;
    if (pixel_width < w || pixel_height < h) {
        throw ContractError("image smaller than the mock latent grid");
    }
    const int bh = (pixel_height + h - 1) / h;
    const int bw = (pixel_width + w - 1) / w;
    return {h, w, 3 * bh * bw, pixel_width, pixel_height};
}

Latent MockBackend::encode_latent(const RasterImage& input) const {
    require_finite(input, "encode_latent");
    const RasterImage image = flatten_rgb(input);
    const LatentShape shape = latent_shape(image.width(), image.height());
    const int per_color = shape.channels / 3 - 1;  // residual slots per color
    Latent out{shape, std::vector<double>(shape.size(), 0.0), 0.0};
    for (int i = 0; i < shape.height; ++i) {
        const BlockSpan rows = block_span(i, image.height(), shape.height);
        for (int j = 0; j < shape.width; ++j) {
            const BlockSpan cols = block_span(j, image.width(), shape.width);
            double* cell = out.values.data() + (static_cast<std::size_t>(i) * shape.width + j) * shape.channels;
            const int n = (rows.end - rows.begin) * (cols.end - cols.begin);
            for (int c = 0; c < 3; ++c) {
                double sum = 0.0;
                for (int y = rows.begin; y < rows.end; ++y) {
                    for (int x = cols.begin; x < cols.end; ++x) sum += image.at(x, y, c);
                }
                const double mean = sum / n;
                cell[c] = mean;
                int p = 0;
                for (int y = rows.begin; y < rows.end; ++y) {
                    for (int x = cols.begin; x < cols.end; ++x, ++p) {
                        if (p > 0) cell[3 + c * per_color + (p - 1)] = image.at(x, y, c) - mean;
                    }
                }
            }
        }
    }
    return out;
}

RasterImage MockBackend::decode_latent(const Latent& latent) const {
    const LatentShape& shape = latent.shape;
    if (shape != latent_shape(shape.pixel_width, shape.pixel_height) || latent.values.size() != shape.size()) {
        throw ContractError("decode_latent: latent shape does not match the mock layout");
    }
    if (latent.sigma != 0.0) spdlog::warn("decode_latent called on a latent at sigma={}", latent.sigma);
    const int per_color = shape.channels / 3 - 1;
    RasterImage image(shape.pixel_width, shape.pixel_height, 3);
    for (int i = 0; i < shape.height; ++i) {
        const BlockSpan rows = block_span(i, shape.pixel_height, shape.height);
        for (int j = 0; j < shape.width; ++j) {
            const BlockSpan cols = block_span(j, shape.pixel_width, shape.width);
            const double* cell =
                latent.values.data() + (static_cast<std::size_t>(i) * shape.width + j) * shape.channels;
            for (int c = 0; c < 3; ++c) {
                const double mean = cell[c];
                double rest = 0.0;
                int p = 0;
                for (int y = rows.begin; y < rows.end; ++y) {
                    for (int x = cols.begin; x < cols.end; ++x, ++p) {
                        if (p == 0) continue;
                        const double r = cell[3 + c * per_color + (p - 1)];
                        image.at(x, y, c) = mean + r;
                        rest += r;
                    }
                }
                image.at(cols.begin, rows.begin, c) = mean - rest;
            }
        }
    }
    image.clamp();
    return image;
}

std::shared_ptr<const MockBackend::IdentityBasis> MockBackend::identity_basis(const LatentShape& shape) const {
    const auto key = std::make_tuple(shape.height, shape.width, shape.channels);
    std::lock_guard lock(cache_->mu);
    auto& slot = cache_->bases[key];
    if (!slot) slot = std::make_shared<const IdentityBasis>(build_basis(shape));
    return slot;
}

MockBackend::IdentityBasis MockBackend::build_basis(const LatentShape& shape) const {
    const std::size_t n = shape.size();
    const std::size_t cells = static_cast<std::size_t>(shape.height) * shape.width;
    const std::size_t means = 3 * cells;
    const auto dim = static_cast<std::size_t>(options_.token_dim);
    const std::size_t span = std::min(n, std::max(dim, means));

    IdentityBasis basis;
    basis.coords.reserve(span);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        for (int c = 0; c < 3; ++c) basis.coords.push_back(cell * shape.channels + c);
    }
    for (std::size_t cell = 0; cell < cells && basis.coords.size() < span; ++cell) {
        for (int c = 3; c < shape.channels && basis.coords.size() < span; ++c) {
            basis.coords.push_back(cell * shape.channels + c);
        }
    }
    basis.coords.resize(span);

    KeyedDigest digest(options_.seed, "identity_basis");
    digest.absorb(std::int64_t{shape.height}).absorb(std::int64_t{shape.width});
    digest.absorb(std::int64_t{shape.channels}).absorb(std::int64_t{options_.token_dim});
    const CounterStream stream(digest.value());
    const auto rows = static_cast<Eigen::Index>(span);
    const auto cols = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd gauss(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) gauss(r, c) = stream.normal(static_cast<std::uint64_t>(r * cols + c));
    }
    Eigen::MatrixXd q;
    if (rows >= cols) {
        // Orthonormal columns: Q^T Q = I_D.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
        q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    } else {
        // Orthonormal rows: Q Q^T = I, so the span is reconstructed exactly.
        Eigen::MatrixXd t = gauss.transpose();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(t);
        q = (qr.householderQ() * Eigen::MatrixXd::Identity(cols, rows)).transpose();
    }
    basis.q.resize(static_cast<std::size_t>(rows * cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) basis.q[static_cast<std::size_t>(r * cols + c)] = q(r, c);
    }
    return basis;
}

std::vector<double> MockBackend::identity_features(const Latent& latent) const {
    const auto basis_ptr = identity_basis(latent.shape);
    const IdentityBasis& basis = *basis_ptr;
    const auto dim = static_cast<std::size_t>(options_.token_dim);
    std::vector<double> f(dim, 0.0);
    for (std::size_t r = 0; r < basis.coords.size(); ++r) {
        const double x = latent.values[basis.coords[r]];
        for (std::size_t d = 0; d < dim; ++d) f[d] += basis.q[r * dim + d] * x;
    }
    return f;
}

std::vector<double> MockBackend::target(const TokenSet& tokens, const LatentShape& shape) const {
    check_tokens(tokens);
    const auto basis_ptr = identity_basis(shape);
    const IdentityBasis& basis = *basis_ptr;
    const auto dim = static_cast<std::size_t>(options_.token_dim);
    const std::vector<double> m = tokens.mean();
    std::vector<double> out(shape.size(), 0.0);
    for (std::size_t r = 0; r < basis.coords.size(); ++r) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) acc += basis.q[r * dim + d] * m[d];
        out[basis.coords[r]] = acc;
    }
    return out;
}

void MockBackend::check_tokens(const TokenSet& tokens) const {
    if (tokens.count() != options_.tokens || tokens.dim() != options_.token_dim) {
        throw ContractError("token set shape does not match the backend (K x D)");
    }
}

TokenSet MockBackend::encode_identity(const RasterImage& image) const {
    require_finite(image, "encode_identity");
    const RasterImage* src = &image;
    RasterImage resized;
    if (image.width() < options_.latent_width || image.height() < options_.latent_height) {
        resized = resize_bilinear(image, std::max(image.width(), options_.latent_width),
                                  std::max(image.height(), options_.latent_height));
        src = &resized;
    }
    const std::vector<double> features = identity_features(encode_latent(*src));

    KeyedDigest digest(options_.seed, "encode_identity");
    absorb_image(digest, image);
    const CounterStream stream(digest.value());
    const int K = options_.tokens;
    const int D = options_.token_dim;
    std::vector<double> spread(static_cast<std::size_t>(K) * D);
    for (std::size_t n = 0; n < spread.size(); ++n) spread[n] = stream.normal(n);
    // Zero-mean across tokens so the token mean is exactly the feature vector
    // up to rounding.
    for (int d = 0; d < D; ++d) {
        double mean = 0.0;
        for (int i = 0; i < K; ++i) mean += spread[static_cast<std::size_t>(i) * D + d];
        mean /= K;
        for (int i = 0; i < K; ++i) spread[static_cast<std::size_t>(i) * D + d] -= mean;
    }
    std::vector<double> values(spread.size());
    for (int i = 0; i < K; ++i) {
        for (int d = 0; d < D; ++d) {
            const std::size_t k = static_cast<std::size_t>(i) * D + d;
            values[k] = features[d] + options_.identity_noise * spread[k];
        }
    }
    return TokenSet(K, D, TokenSource::identity, std::move(values));
}

TokenSet MockBackend::generate_tokens(const CompositionPrompt& prompt) const {
    require_finite(prompt.background, "generate_tokens");
    require_finite(prompt.foreground, "generate_tokens");
    if (prompt.caption.empty()) throw ContractError("generate_tokens: caption must not be empty");
    const std::vector<double> features = identity_features(encode_latent(prompt.background));

    KeyedDigest digest(options_.seed, "generate_tokens");
    digest.absorb(prompt.caption);
    digest.absorb(prompt.bbox.left).absorb(prompt.bbox.top).absorb(prompt.bbox.width).absorb(prompt.bbox.height);
    absorb_image(digest, prompt.background);
    absorb_image(digest, prompt.foreground);
    const CounterStream stream(digest.value());
    const int K = options_.tokens;
    const int D = options_.token_dim;
    std::vector<double> values(static_cast<std::size_t>(K) * D);
    for (int i = 0; i < K; ++i) {
        for (int d = 0; d < D; ++d) {
            const std::size_t k = static_cast<std::size_t>(i) * D + d;
            values[k] = features[d] + options_.generative_noise * stream.normal(k);
        }
    }
    return TokenSet(K, D, TokenSource::generative, std::move(values));
}

AttentionStack MockBackend::attention_probe(const TokenSet& tokens, const Latent& latent, double sigma) const {
    check_tokens(tokens);
    if (latent.shape.height != options_.latent_height || latent.shape.width != options_.latent_width ||
        latent.values.size() != latent.shape.size()) {
        throw ContractError("attention_probe: latent grid does not match the backend");
    }
    const int K = options_.tokens;
    const int H = options_.latent_height;
    const int W = options_.latent_width;
    const std::size_t cells = static_cast<std::size_t>(H) * W;

    AttentionStack stack;
    if (options_.attention == AttentionFixture::delta) {
        AttentionMap map(K, H, W, 0.0);
        for (int i = 0; i < K; ++i) map.token(i)[static_cast<std::size_t>(i) % cells] = 1.0;
        stack.layers.assign(static_cast<std::size_t>(options_.attention_layers), map);
        return stack;
    }

    KeyedDigest digest(options_.seed, "attention_probe");
    digest.absorb(tokens.values()).absorb(std::span<const double>(latent.values)).absorb(sigma);
    const CounterStream stream(digest.value());
    std::vector<double> scores(cells);
    for (int l = 0; l < options_.attention_layers; ++l) {
        AttentionMap map(K, H, W);
        for (int i = 0; i < K; ++i) {
            const std::uint64_t base = (static_cast<std::uint64_t>(l) * K + i) * cells;
            double top = -INFINITY;
            for (std::size_t c = 0; c < cells; ++c) {
                scores[c] = options_.attention_temperature * stream.normal(base + c);
                top = std::max(top, scores[c]);
            }
            double total = 0.0;
            auto out = map.token(i);
            for (std::size_t c = 0; c < cells; ++c) {
                out[c] = std::exp(scores[c] - top);
                total += out[c];
            }
            for (auto& v : out) v /= total;
        }
        stack.layers.push_back(std::move(map));
    }
    return stack;
}

std::vector<double> MockBackend::predict_velocity(const Latent& latent, double sigma, const TokenSet& tokens) const {
    if (!(sigma > 0.0 && sigma <= 1.0)) throw ContractError("predict_velocity: sigma must lie in (0, 1]");
    if (latent.values.size() != latent.shape.size()) throw ContractError("predict_velocity: malformed latent");
    const std::vector<double> goal = target(tokens, latent.shape);
    const double scale = std::max(sigma, options_.sigma_min);
    std::vector<double> v(goal.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = (latent.values[k] - goal[k]) / scale;
    return v;
}

}  // namespace tokencomp
