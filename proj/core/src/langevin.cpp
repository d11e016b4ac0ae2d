#include "rotwalk/langevin.hpp"

#include <algorithm>
#include <cmath>

#include "rotwalk/error.hpp"

namespace rotwalk {

void LangevinConfig::validate() const
{
    if (!std::isfinite(rotation_rate))
        throw ConfigError("rotation_rate", "rotation_rate must be finite");
    if (!std::isfinite(drift_gain))
        throw ConfigError("drift_gain", "drift_gain must be finite");
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
        throw ConfigError("noise_scale", "noise_scale must be nonnegative");
    if (!(step > 0.0) || !std::isfinite(step))
        throw ConfigError("step", "step must be positive");
    if (!(max_time > 0.0) || !std::isfinite(max_time))
        throw ConfigError("max_time", "max_time must be positive");
    if (!std::isfinite(x0[0]) || !std::isfinite(x0[1]))
        throw ConfigError("x0", "x0 must be finite");
    if (stride < 1)
        throw ConfigError("stride", "stride must be at least 1");
}

double LangevinSample::radius() const noexcept
{
    return std::hypot(x[0], x[1]);
}

LangevinSummary integrate(const LangevinConfig& config, RngState& rng, const LangevinSink& sink)
{
    config.validate();
    const double h = config.step;
    const auto steps = static_cast<std::int64_t>(std::ceil(config.max_time / h - 1e-9));
    const double a = config.drift_gain;
    const double w = config.rotation_rate;
    const double kick = config.noise_scale * std::sqrt(h);

    LangevinSample s{0.0, config.x0};
    if (sink)
        sink(s);
    for (std::int64_t n = 1; n <= steps; ++n)
    {
        const double x = s.x[0];
        const double y = s.x[1];
        double nx = x + h * (a * x - w * y);
        double ny = y + h * (w * x + a * y);
        if (kick > 0.0)
        {
            nx += kick * rng.normal();
            ny += kick * rng.normal();
        }
        s.x = {nx, ny};
        s.t = static_cast<double>(n) * h;
        if (sink && (n % config.stride == 0 || n == steps))
            sink(s);
    }
    return {s, steps};
}

std::array<double, 2> langevin_exact_mean(const LangevinConfig& config, double t)
{
    const double growth = std::exp(config.drift_gain * t);
    const double c = std::cos(config.rotation_rate * t);
    const double s = std::sin(config.rotation_rate * t);
    return {growth * (c * config.x0[0] - s * config.x0[1]),
            growth * (s * config.x0[0] + c * config.x0[1])};
}

const char* to_string(GrowthLaw law) noexcept
{
    return law == GrowthLaw::exponential ? "exponential" : "polynomial";
}

GrowthLawFit fit_growth_laws(std::span<const RadiusSample> samples, double tail_fraction)
{
    if (samples.empty())
        throw DomainError("growth fit needs samples");
    const auto [lo_it, hi_it] = std::minmax_element(
        samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    const double start = lo_it->t + tail_fraction * (hi_it->t - lo_it->t);

    std::vector<double> t, log_t, log_r;
    for (const auto& s : samples)
    {
        if (s.t < start || !(s.t > 0.0) || !(s.r > 0.0))
            continue;
        t.push_back(s.t);
        log_t.push_back(std::log(s.t));
        log_r.push_back(std::log(s.r));
    }
    if (t.size() < 3)
        throw DomainError("growth fit needs at least 3 samples with positive time and radius");

    GrowthLawFit fit;
    fit.samples = t.size();
    fit.exponential = fit_line(t, log_r);
    fit.polynomial = fit_line(log_t, log_r);
    fit.winner = fit.exponential.rss <= fit.polynomial.rss ? GrowthLaw::exponential
                                                           : GrowthLaw::polynomial;
    return fit;
}

GrowthComparison compare_growth(std::span<const RadiusSample> collision,
                                std::span<const RadiusSample> langevin, double tail_fraction)
{
    return {fit_growth_laws(collision, tail_fraction), fit_growth_laws(langevin, tail_fraction)};
}

}  // namespace rotwalk
