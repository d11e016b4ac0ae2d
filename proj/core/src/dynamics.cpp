#include "rotwalk/dynamics.hpp"

#include <cmath>

#include "rotwalk/arclength.hpp"
#include "rotwalk/error.hpp"
#include "rotwalk/geometry.hpp"

namespace rotwalk {

void SimConfig::validate() const
{
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ConfigError("omega", "omega must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ConfigError("lambda", "lambda must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw ConfigError("sigma", "sigma must be nonnegative");
    eta.validate();
    if (!is_finite(x0))
        throw ConfigError("x0", "x0 must be finite");
    if (!is_finite(v0))
        throw ConfigError("v0", "v0 must be finite");
    if (!stop.max_events && !stop.max_time && !stop.max_radius)
        throw ConfigError("stop", "stop needs at least one of max_events, max_time, max_radius");
    if (stop.max_events && *stop.max_events < 0)
        throw ConfigError("stop.max_events", "stop.max_events must be nonnegative");
    if (stop.max_time && !(*stop.max_time > 0.0))
        throw ConfigError("stop.max_time", "stop.max_time must be positive");
    if (stop.max_radius && !(*stop.max_radius > 0.0))
        throw ConfigError("stop.max_radius", "stop.max_radius must be positive");
}

namespace {

/// Outgoing velocity relative to w = u + delta.
Vec3 scattered_relative(const Vec3& v, const Vec3& w, const Vec3& eta)
{
    const Vec3 rel = v - w;
    const double speed = norm(rel);
    if (speed < 1e-14)
        return {};
    return speed * (rotation_to(rel) * eta);
}

}  // namespace

Vec3 resolve_collision(const Vec3& v, const Vec3& u, const Vec3& delta, const Vec3& eta)
{
    const Vec3 w = u + delta;
    return w + scattered_relative(v, w, eta);
}

CollisionEvent advance(ParticleState& state, double omega, double xi, const Vec3& delta,
                       const Vec3& eta)
{
    const auto problem = ArcLengthProblem::from_state(omega, state.x, state.v);
    const double tau = invert_arc_length(problem, xi);

    CollisionEvent ev;
    ev.k = state.k + 1;
    ev.t_before = state.t;
    ev.tau = tau;
    ev.t_after = state.t + tau;
    ev.x = state.x + tau * state.v;
    ev.v_before = state.v;
    ev.xi = xi;
    ev.delta = delta;
    ev.eta = eta;
    ev.u = field_at(omega, ev.x);
    // Far from the axis |u| dwarfs the relative speed, so e_after is built from
    // the scattered part directly instead of as v_after - u.
    const Vec3 scattered = scattered_relative(ev.v_before, ev.u + delta, eta);
    ev.v_after = (ev.u + delta) + scattered;
    ev.e_after = delta + scattered;

    state.x = ev.x;
    state.v = ev.v_after;
    state.t = ev.t_after;
    state.k = ev.k;
    return ev;
}

CollisionEvent next_event(ParticleState& state, const SimConfig& config, RngState& rng)
{
    const double xi = sample_xi(rng, PathLengthLaw{config.lambda});
    const Vec3 delta = sample_delta(rng, NoiseLaw{config.sigma});
    const Vec3 eta = sample_eta(rng, config.eta);
    return advance(state, config.omega, xi, delta, eta);
}

Vec3 position_at(const ParticleState& state, double t)
{
    if (t < state.t)
        throw DomainError("time before current event");
    return state.x + (t - state.t) * state.v;
}

std::string to_string(StopReason reason)
{
    switch (reason)
    {
        case StopReason::max_events: return "max_events";
        case StopReason::max_time: return "max_time";
        case StopReason::max_radius: return "max_radius";
    }
    return "unknown";
}

namespace {

std::optional<StopReason> stop_reason(const StopRule& stop, const ParticleState& s)
{
    if (stop.max_events && s.k >= *stop.max_events)
        return StopReason::max_events;
    if (stop.max_time && s.t >= *stop.max_time)
        return StopReason::max_time;
    if (stop.max_radius && radial_distance(s.x) >= *stop.max_radius)
        return StopReason::max_radius;
    return std::nullopt;
}

}  // namespace

TrajectorySummary run_trajectory(const SimConfig& config, RngState& rng, const EventSink& sink)
{
    config.validate();
    TrajectorySummary summary;
    ParticleState state = config.initial_state();
    for (;;)
    {
        if (auto reason = stop_reason(config.stop, state))
        {
            summary.reason = *reason;
            break;
        }
        try
        {
            const CollisionEvent ev = next_event(state, config, rng);
            if (sink)
                sink(ev);
        }
        catch (const Error& e)
        {
            throw TrajectoryError(state.k + 1, e.what());
        }
    }
    summary.final_state = state;
    summary.events = state.k;
    return summary;
}

}  // namespace rotwalk
