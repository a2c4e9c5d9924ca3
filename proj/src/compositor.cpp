#include "tokencomp/compositor.hpp"

#include "tokencomp/errors.hpp"
#include "tokencomp/keyed_mix.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace tokencomp {

MaskResolution mask_resolution_from_string(std::string_view name) {
    if (name == "pixel") return MaskResolution::pixel;
    if (name == "latent") return MaskResolution::latent;
    throw ConfigError(fmt::format("unknown mask resolution '{}' (expected pixel or latent)", name));
}

std::string_view to_string(MaskResolution mode) { return mode == MaskResolution::pixel ? "pixel" : "latent"; }

ImageRegion image_region_from_string(std::string_view name) {
    if (name == "full") return ImageRegion::full;
    if (name == "bbox") return ImageRegion::bbox;
    throw ConfigError(fmt::format("unknown image region '{}' (expected full or bbox)", name));
}

std::string_view to_string(ImageRegion region) { return region == ImageRegion::full ? "full" : "bbox"; }

nlohmann::json to_json(const ElementRecord& r) {
    return {{"element_id", r.element_id},
            {"kind", r.kind},
            {"caption", r.caption},
            {"injection", to_json(r.injection)},
            {"sigmas", r.sigmas},
            {"start_index", r.start_index},
            {"canvas_in_checksum", r.canvas_in_checksum},
            {"generated_checksum", r.generated_checksum},
            {"canvas_out_checksum", r.canvas_out_checksum},
            {"mask_pixels", r.mask_pixels}};
}

nlohmann::json to_json(const CompositionTrace& trace) {
    nlohmann::json elements = nlohmann::json::array();
    for (const auto& r : trace.elements) elements.push_back(to_json(r));
    return {{"initial_canvas_checksum", trace.initial_canvas_checksum}, {"elements", elements}};
}

std::string fallback_caption(const DesignElement& element) {
    return fmt::format("a {} design element {}", to_string(element.kind), element.id);
}

std::uint64_t element_seed(std::uint64_t seed, const std::string& element_id) {
    return KeyedDigest(seed, "element").absorb(element_id).value();
}

namespace {

struct ForegroundRender {
    RasterImage rgba;  // fitted to the pixel box
    PixelBox box;
    bool has_alpha = false;
};

ForegroundRender render_foreground(const DesignElement& element, int canvas_w, int canvas_h,
                                   const AssetStore& assets) {
    auto [box, degenerate] = to_pixel_box(element.bbox, canvas_w, canvas_h);
    if (degenerate) spdlog::warn("element '{}': bbox rounds to zero area, clamped to 1 px", element.id);
    RenderedAsset asset = assets.render_fitted(element.asset, box.width, box.height);
    ForegroundRender out{std::move(asset.rgba), box, asset.has_alpha || element.kind == ElementKind::svg};
    if (element.alpha) {
        // External matte: luminance times the matte's own coverage.
        const RenderedAsset matte = assets.render_fitted(*element.alpha, box.width, box.height);
        for (int y = 0; y < box.height; ++y) {
            for (int x = 0; x < box.width; ++x) {
                const double lum = 0.2126 * matte.rgba.at(x, y, 0) + 0.7152 * matte.rgba.at(x, y, 1) +
                                   0.0722 * matte.rgba.at(x, y, 2);
                out.rgba.at(x, y, 3) = std::min(out.rgba.at(x, y, 3), lum * matte.rgba.at(x, y, 3));
            }
        }
        out.has_alpha = true;
    }
    return out;
}

BinaryMask latent_mask_from_alpha(const ForegroundRender& fg, int canvas_w, int canvas_h, int h_lat, int w_lat,
                                  double threshold) {
    BinaryMask out(h_lat, w_lat);
    for (int i = 0; i < h_lat; ++i) {
        const int r0 = i * canvas_h / h_lat;
        const int r1 = std::max(r0 + 1, (i + 1) * canvas_h / h_lat);
        for (int j = 0; j < w_lat; ++j) {
            const int c0 = j * canvas_w / w_lat;
            const int c1 = std::max(c0 + 1, (j + 1) * canvas_w / w_lat);
            double sum = 0.0;
            for (int y = r0; y < r1; ++y) {
                for (int x = c0; x < c1; ++x) {
                    if (fg.box.contains(x, y)) sum += fg.rgba.at(x - fg.box.x, y - fg.box.y, 3);
                }
            }
            out.set(i, j, sum / ((r1 - r0) * (c1 - c0)) > threshold);
        }
    }
    return out;
}

RasterImage update_canvas(const RasterImage& canvas, const RasterImage& generated, const DesignElement& element,
                          const BinaryMask& fg_mask, const PixelBox& box, const ComposeConfig& cfg) {
    if (element.kind == ElementKind::svg && cfg.svg_paste_back) {
        RasterImage out = canvas;
        for (int y = 0; y < canvas.height(); ++y) {
            for (int x = 0; x < canvas.width(); ++x) {
                if (!fg_mask.at(y, x)) continue;
                for (int c = 0; c < 3; ++c) out.at(x, y, c) = generated.at(x, y, c);
            }
        }
        return out;
    }
    if (element.kind == ElementKind::image && cfg.image_region == ImageRegion::bbox) {
        RasterImage out = canvas;
        const int x0 = std::max(0, box.x - cfg.region_dilation);
        const int y0 = std::max(0, box.y - cfg.region_dilation);
        const int x1 = std::min(canvas.width(), box.x + box.width + cfg.region_dilation);
        const int y1 = std::min(canvas.height(), box.y + box.height + cfg.region_dilation);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                for (int c = 0; c < 3; ++c) out.at(x, y, c) = generated.at(x, y, c);
            }
        }
        return out;
    }
    return generated;
}

}  // namespace

ElementOutcome compose_element(const RasterImage& canvas, const DesignElement& element, const ComposeConfig& cfg,
                               const ModelBackend& backend, const AssetStore& assets) {
    if (element.kind == ElementKind::background) {
        throw ContractError("compose_element: background elements are not composed");
    }
    const BackendInfo info = backend.info();
    const int W = canvas.width();
    const int H = canvas.height();

    ForegroundRender fg;
    try {
        fg = render_foreground(element, W, H, assets);
    } catch (const AssetError& e) {
        throw AssetError(fmt::format("element '{}': {}", element.id, e.what()));
    }

    const BinaryMask local = fg.has_alpha ? mask_from_alpha(fg.rgba, cfg.alpha_threshold)
                                          : BinaryMask(fg.box.height, fg.box.width, 1);
    BinaryMask fg_mask = place_mask(local, fg.box, H, W);

    BinaryMask fg_latent;
    if (cfg.mask_resolution == MaskResolution::pixel) {
        fg_latent = downsample_to_latent(fg_mask, info.latent_height, info.latent_width);
    } else if (fg.has_alpha) {
        fg_latent = latent_mask_from_alpha(fg, W, H, info.latent_height, info.latent_width, cfg.alpha_threshold);
    } else {
        fg_latent = mask_from_bbox(element.bbox, info.latent_height, info.latent_width);
    }

    const SigmaSchedule schedule = make_schedule(cfg.scheduler.n_steps, cfg.scheduler.shape, cfg.scheduler.shift);
    const int probe_index = cfg.scheduler.scoring_index.value_or(scoring_index(schedule));
    if (probe_index < 0 || probe_index >= schedule.n_steps()) {
        throw ConfigError("scoring_index must lie in [0, n_steps)");
    }
    const std::uint64_t seed = element_seed(cfg.seed, element.id);

    InjectionInputs inputs{fg.rgba,
                           canvas,
                           element.bbox,
                           element.caption.value_or(fallback_caption(element)),
                           fg_latent,
                           complement(fg_latent),
                           schedule.sigmas[probe_index],
                           seed};
    if (inputs.caption.empty()) inputs.caption = fallback_caption(element);

    ElementOutcome outcome;
    outcome.injection = run_token_injection(inputs, backend, cfg.injection);

    const InvertedCanvas inverted = invert_canvas(canvas, cfg.scheduler.strength, schedule, seed, backend);
    const Latent clean = denoise(inverted.latent, inverted.start_index, schedule, outcome.injection.tokens, backend);
    RasterImage generated = backend.decode_latent(clean);
    if (generated.width() != W || generated.height() != H) {
        throw ContractError("backend decoded an image of the wrong size");
    }
    generated = flatten_rgb(generated);

    outcome.canvas = update_canvas(canvas, generated, element, fg_mask, fg.box, cfg);

    ElementRecord& rec = outcome.record;
    rec.element_id = element.id;
    rec.kind = std::string(to_string(element.kind));
    rec.caption = inputs.caption;
    rec.injection = outcome.injection.trace;
    rec.sigmas = schedule.sigmas;
    rec.start_index = inverted.start_index;
    rec.canvas_in_checksum = checksum(canvas);
    rec.generated_checksum = checksum(generated);
    rec.canvas_out_checksum = checksum(outcome.canvas);
    rec.mask_pixels = fg_mask.count();
    outcome.fg_mask = std::move(fg_mask);
    return outcome;
}

RasterImage render_background(const DesignDocument& doc, const AssetStore& assets) {
    const DesignElement& bg = doc.background();
    try {
        RenderedAsset r = assets.render_stretched(bg.asset, doc.canvas.width, doc.canvas.height);
        return flatten_rgb(r.rgba);
    } catch (const AssetError& e) {
        throw AssetError(fmt::format("element '{}': {}", bg.id, e.what()));
    }
}

CompositionFailure::CompositionFailure(std::string element_id, CompositionTrace partial, std::exception_ptr cause,
                                       std::string what)
    : element_id_(std::move(element_id)), partial_(std::move(partial)), cause_(cause), what_(std::move(what)) {}

CompositionResult compose_document(const DesignDocument& doc, const ComposeConfig& cfg, const ModelBackend& backend,
                                   const AssetStore& assets, const StepObserver& observer) {
    CompositionResult result;
    try {
        result.backing = render_background(doc, assets);
    } catch (const std::exception& e) {
        throw CompositionFailure(doc.background().id, {}, std::current_exception(), e.what());
    }
    result.trace.initial_canvas_checksum = checksum(result.backing);

    std::size_t index = 0;
    for (const DesignElement& element : foreground_elements(doc)) {
        try {
            ElementOutcome out = compose_element(result.backing, element, cfg, backend, assets);
            result.backing = std::move(out.canvas);
            result.trace.elements.push_back(std::move(out.record));
        } catch (const std::exception& e) {
            std::string what = e.what();
            if (what.find(element.id) == std::string::npos) what = fmt::format("element '{}': {}", element.id, what);
            throw CompositionFailure(element.id, result.trace, std::current_exception(), what);
        }
        if (observer) observer(index, element, result.backing);
        ++index;
    }
    return result;
}

}  // namespace tokencomp
