#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rotwalk/regression.hpp"
#include "rotwalk/sampling.hpp"

namespace rotwalk {

/*!
 * Planar linear SDE dX = (rotation_rate J + drift_gain I) X dt + noise_scale dB
 * with J = [[0, -1], [1, 0]], the continuous stipulation the collision model is
 * compared against.
 */
struct LangevinConfig
{
    double rotation_rate = 1.0;
    double drift_gain = 0.1;
    double noise_scale = 1.0;
    double step = 1e-3;
    std::array<double, 2> x0{1.0, 0.0};
    std::uint64_t seed = 0;
    double max_time = 100.0;
    std::int64_t stride = 100;  //!< emit every `stride` steps (plus the endpoints)

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

struct LangevinSample
{
    double t = 0.0;
    std::array<double, 2> x{};

    double radius() const noexcept;
};

struct LangevinSummary
{
    LangevinSample final_sample;
    std::int64_t steps = 0;
};

using LangevinSink = std::function<void(const LangevinSample&)>;

/// Euler-Maruyama integration up to max_time; emits t = 0 and the final sample
/// in addition to every `stride`-th step.
LangevinSummary integrate(const LangevinConfig& config, RngState& rng, const LangevinSink& sink);

/// Noise-free solution e^{(drift_gain I + rotation_rate J) t} x0.
std::array<double, 2> langevin_exact_mean(const LangevinConfig& config, double t);

//---------------------------------------------------------------------------//
// Growth-law comparison
//---------------------------------------------------------------------------//

struct RadiusSample
{
    double t = 0.0;
    double r = 0.0;
};

enum class GrowthLaw
{
    exponential,  //!< log r linear in t
    polynomial,   //!< log r linear in log t
};

const char* to_string(GrowthLaw law) noexcept;

struct GrowthLawFit
{
    LinearFit exponential;  //!< slope = exponential rate
    LinearFit polynomial;   //!< slope = time exponent
    GrowthLaw winner = GrowthLaw::exponential;
    std::size_t samples = 0;
};

/*!
 * Fits both growth laws to samples with t >= t_start + tail_fraction * span
 * (positive t and r only) and picks the law with the smaller residual sum of
 * squares in log r. Throws DomainError with fewer than 3 usable samples.
 */
GrowthLawFit fit_growth_laws(std::span<const RadiusSample> samples, double tail_fraction = 0.5);

struct GrowthComparison
{
    GrowthLawFit collision;
    GrowthLawFit langevin;
};

GrowthComparison compare_growth(std::span<const RadiusSample> collision,
                                std::span<const RadiusSample> langevin,
                                double tail_fraction = 0.5);

}  // namespace rotwalk
