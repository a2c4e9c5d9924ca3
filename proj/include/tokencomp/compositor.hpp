#pragma once

#include "tokencomp/assets.hpp"
#include "tokencomp/backend.hpp"
#include "tokencomp/design.hpp"
#include "tokencomp/injection.hpp"
#include "tokencomp/mask.hpp"
#include "tokencomp/scheduler.hpp"

#include <cstdint>
#include <exception>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace tokencomp {

struct SchedulerConfig {
    int n_steps = 28;
    ScheduleShape shape = ScheduleShape::shifted;
    double shift = 3.0;
    double strength = 0.7;
    std::optional<int> scoring_index;  // defaults to floor(N / 2)
};

/// Resolution at which m_fg is built before relevance scoring.
enum class MaskResolution {
    pixel,   // build on the canvas grid, max-pool to the latent grid
    latent,  // build directly on the latent grid
};

/// Canvas area an image element's generation may overwrite.
enum class ImageRegion {
    full,  // whole canvas
    bbox,  // the element's pixel box grown by region_dilation pixels
};

MaskResolution mask_resolution_from_string(std::string_view name);
std::string_view to_string(MaskResolution mode);
ImageRegion image_region_from_string(std::string_view name);
std::string_view to_string(ImageRegion region);

struct ComposeConfig {
    InjectionConfig injection;
    SchedulerConfig scheduler;
    std::uint64_t seed = 0;
    bool svg_paste_back = true;
    double alpha_threshold = kDefaultAlphaThreshold;
    MaskResolution mask_resolution = MaskResolution::pixel;
    ImageRegion image_region = ImageRegion::full;
    int region_dilation = 0;
};

struct ElementRecord {
    std::string element_id;
    std::string kind;
    std::string caption;
    InjectionTrace injection;
    std::vector<double> sigmas;
    int start_index = 0;
    std::string canvas_in_checksum;
    std::string generated_checksum;
    std::string canvas_out_checksum;
    std::size_t mask_pixels = 0;
};

struct CompositionTrace {
    std::string initial_canvas_checksum;
    std::vector<ElementRecord> elements;
};

nlohmann::json to_json(const ElementRecord& record);
nlohmann::json to_json(const CompositionTrace& trace);

struct ElementOutcome {
    RasterImage canvas;
    ElementRecord record;
    InjectionResult injection;
    BinaryMask fg_mask;  // canvas resolution
};

/// Caption used when an element has none.
std::string fallback_caption(const DesignElement& element);

/// Seed for one element's noise, derived from the run seed and element id.
std::uint64_t element_seed(std::uint64_t seed, const std::string& element_id);

/// One step of the sequential loop: prompt, token injection, canvas
/// inversion, denoising with the blended tokens, decode, canvas update.
/// Image elements take the generated canvas; SVG elements (with paste-back)
/// take generated pixels only inside their own alpha mask.
ElementOutcome compose_element(const RasterImage& canvas, const DesignElement& element, const ComposeConfig& cfg,
                               const ModelBackend& backend, const AssetStore& assets);

/// Renders the background element to the canvas resolution as RGB.
RasterImage render_background(const DesignDocument& doc, const AssetStore& assets);

/// Thrown by compose_document when an element fails; carries the trace of
/// everything composed before it and the original error.
class CompositionFailure : public std::exception {
public:
    CompositionFailure(std::string element_id, CompositionTrace partial, std::exception_ptr cause, std::string what);

    const char* what() const noexcept override { return what_.c_str(); }
    const std::string& element_id() const { return element_id_; }
    const CompositionTrace& partial_trace() const { return partial_; }
    std::exception_ptr cause() const { return cause_; }

private:
    std::string element_id_;
    CompositionTrace partial_;
    std::exception_ptr cause_;
    std::string what_;
};

struct CompositionResult {
    RasterImage backing;
    CompositionTrace trace;
};

using StepObserver = std::function<void(std::size_t index, const DesignElement& element, const RasterImage& canvas)>;

/// Starts from the rendered background and threads the canvas through every
/// foreground element in layer order.
CompositionResult compose_document(const DesignDocument& doc, const ComposeConfig& cfg, const ModelBackend& backend,
                                   const AssetStore& assets, const StepObserver& observer = {});

}  // namespace tokencomp
