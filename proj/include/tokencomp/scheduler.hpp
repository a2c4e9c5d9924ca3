#pragma once

#include "tokencomp/backend.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace tokencomp {

enum class ScheduleShape { linear, shifted };

ScheduleShape schedule_shape_from_string(std::string_view name);
std::string_view to_string(ScheduleShape shape);

/// Strictly decreasing noise levels from exactly 1 down to exactly 0.
struct SigmaSchedule {
    std::vector<double> sigmas;  // n_steps + 1 entries

    int n_steps() const { return static_cast<int>(sigmas.size()) - 1; }
};

/// linear:  sigma_k = 1 - k/N
/// shifted: sigma_k = shift*u / (1 + (shift - 1)*u), u = 1 - k/N
SigmaSchedule make_schedule(int n_steps, ScheduleShape shape, double shift = 3.0);

/// Grid index used for the attention scoring pass: floor(N / 2).
int scoring_index(const SigmaSchedule& schedule);

/// (1 - sigma) * x0 + sigma * eps, tagged with sigma.
Latent add_noise(const Latent& x0, std::span<const double> eps, double sigma);

/// Standard normal noise that depends only on (seed, shape).
std::vector<double> seeded_noise(std::uint64_t seed, const LatentShape& shape);

/// Smallest k with sigma_k <= strength.
int start_index_for(const SigmaSchedule& schedule, double strength);

struct InvertedCanvas {
    Latent latent;
    int start_index = 0;
};

/// Encodes the canvas and forward-noises it to the first grid level at or
/// below `strength`, which must lie in (0, 1].
InvertedCanvas invert_canvas(const RasterImage& canvas, double strength, const SigmaSchedule& schedule,
                             std::uint64_t seed, const ModelBackend& backend);

/// Euler integration x <- x + (sigma_{k+1} - sigma_k) * v(x, sigma_k) from
/// `start_index` to the end of the grid. Returns a latent at sigma = 0.
Latent denoise(Latent latent, int start_index, const SigmaSchedule& schedule, const TokenSet& tokens,
               const ModelBackend& backend);

}  // namespace tokencomp
