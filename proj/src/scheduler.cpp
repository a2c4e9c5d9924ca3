#include "tokencomp/scheduler.hpp"

#include "tokencomp/errors.hpp"
#include "tokencomp/keyed_mix.hpp"

#include <cmath>
#include <string>

namespace tokencomp {

ScheduleShape schedule_shape_from_string(std::string_view name) {
    if (name == "linear") return ScheduleShape::linear;
    if (name == "shifted") return ScheduleShape::shifted;
    throw ConfigError("unknown schedule shape '" + std::string(name) + "' (expected linear or shifted)");
}

std::string_view to_string(ScheduleShape shape) { return shape == ScheduleShape::linear ? "linear" : "shifted"; }

SigmaSchedule make_schedule(int n_steps, ScheduleShape shape, double shift) {
    if (n_steps < 1) throw ConfigError("scheduler needs at least one step");
    if (!(shift > 0.0) || !std::isfinite(shift)) throw ConfigError("schedule shift must be positive");
    SigmaSchedule s;
    s.sigmas.resize(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) {
        const double u = 1.0 - static_cast<double>(k) / n_steps;
        s.sigmas[k] = shape == ScheduleShape::linear ? u : shift * u / (1.0 + (shift - 1.0) * u);
    }
    s.sigmas.front() = 1.0;
    s.sigmas.back() = 0.0;
    return s;
}

int scoring_index(const SigmaSchedule& schedule) { return schedule.n_steps() / 2; }

Latent add_noise(const Latent& x0, std::span<const double> eps, double sigma) {
    if (eps.size() != x0.values.size()) throw ContractError("add_noise: noise shape differs from the latent");
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw ContractError("add_noise: sigma must lie in [0, 1]");
    Latent out{x0.shape, std::vector<double>(x0.values.size()), sigma};
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = (1.0 - sigma) * x0.values[k] + sigma * eps[k];
    }
    return out;
}

std::vector<double> seeded_noise(std::uint64_t seed, const LatentShape& shape) {
    KeyedDigest digest(seed, "latent_noise");
    digest.absorb(std::int64_t{shape.height}).absorb(std::int64_t{shape.width}).absorb(std::int64_t{shape.channels});
    const CounterStream stream(digest.value());
    std::vector<double> eps(shape.size());
    for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = stream.normal(k);
    return eps;
}

int start_index_for(const SigmaSchedule& schedule, double strength) {
    if (!(strength > 0.0 && strength <= 1.0)) throw ConfigError("strength must lie in (0, 1]");
    for (int k = 0; k <= schedule.n_steps(); ++k) {
        if (schedule.sigmas[k] <= strength) return k;
    }
    return schedule.n_steps();
}

InvertedCanvas invert_canvas(const RasterImage& canvas, double strength, const SigmaSchedule& schedule,
                             std::uint64_t seed, const ModelBackend& backend) {
    const int start = start_index_for(schedule, strength);
    const Latent x0 = backend.encode_latent(canvas);
    const std::vector<double> eps = seeded_noise(seed, x0.shape);
    return {add_noise(x0, eps, schedule.sigmas[start]), start};
}

Latent denoise(Latent latent, int start_index, const SigmaSchedule& schedule, const TokenSet& tokens,
               const ModelBackend& backend) {
    if (start_index < 0 || start_index > schedule.n_steps()) throw ContractError("denoise: start index off the grid");
    if (latent.sigma != schedule.sigmas[start_index]) {
        throw ContractError("denoise: latent sigma does not match the schedule at the start index");
    }
    for (int k = start_index; k < schedule.n_steps(); ++k) {
        const double sigma = schedule.sigmas[k];
        const double step = schedule.sigmas[k + 1] - sigma;
        const std::vector<double> v = backend.predict_velocity(latent, sigma, tokens);
        if (v.size() != latent.values.size()) throw ContractError("denoise: velocity shape differs from the latent");
        for (std::size_t i = 0; i < v.size(); ++i) latent.values[i] += step * v[i];
        latent.sigma = schedule.sigmas[k + 1];
    }
    latent.sigma = 0.0;
    for (double v : latent.values) {
        if (!std::isfinite(v)) throw ContractError("denoise: non-finite latent value");
    }
    return latent;
}

}  // namespace tokencomp
