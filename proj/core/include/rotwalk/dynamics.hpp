#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "rotwalk/sampling.hpp"
#include "rotwalk/vec3.hpp"

namespace rotwalk {

/// Particle right after its k-th collision (k = 0 is the initial state).
struct ParticleState
{
    Vec3 x;
    Vec3 v;
    double t = 0.0;
    std::int64_t k = 0;
};

/// Everything that happened in one collision.
struct CollisionEvent
{
    std::int64_t k = 0;     //!< index of the collision, starting at 1
    double t_before = 0.0;  //!< time of the previous event
    double t_after = 0.0;   //!< time of this collision
    double tau = 0.0;       //!< t_after - t_before
    Vec3 x;                 //!< collision position
    Vec3 v_before;
    Vec3 v_after;
    double xi = 0.0;  //!< sampled relative path length
    Vec3 delta;       //!< thermal noise
    Vec3 eta;         //!< scattering sample
    Vec3 u;           //!< medium velocity at the collision point
    Vec3 e_after;     //!< v_after - u, computed without cancellation against u

    friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

struct StopRule
{
    std::optional<std::int64_t> max_events;
    std::optional<double> max_time;
    std::optional<double> max_radius;
};

struct SimConfig
{
    double omega = 1.0;
    double lambda = 1.0;
    double sigma = 0.1;
    EtaLaw eta;
    Vec3 x0{1.0, 0.0, 0.0};
    Vec3 v0{};
    std::uint64_t seed = 0;
    StopRule stop;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    ParticleState initial_state() const { return {x0, v0, 0.0, 0}; }
};

/*!
 * Post-collision velocity.
 *
 * With w = u + delta the particle leaves with w + |v - w| R_{v-w} eta, where
 * R_{v-w} is the canonical rotation taking e1 to the relative direction.
 * A vanishing relative speed (below 1e-14) returns w.
 */
Vec3 resolve_collision(const Vec3& v, const Vec3& u, const Vec3& delta, const Vec3& eta);

/// Advances `state` through one flight of relative length `xi` and resolves
/// the collision with the given noise and scattering samples.
CollisionEvent advance(ParticleState& state, double omega, double xi, const Vec3& delta,
                       const Vec3& eta);

/// Samples (xi, delta, eta) in that order and calls advance().
CollisionEvent next_event(ParticleState& state, const SimConfig& config, RngState& rng);

/// Position on the current flight at time `t` (>= state.t).
Vec3 position_at(const ParticleState& state, double t);

enum class StopReason
{
    max_events,
    max_time,
    max_radius,
};

std::string to_string(StopReason reason);

struct TrajectorySummary
{
    ParticleState final_state;
    std::int64_t events = 0;
    StopReason reason = StopReason::max_events;
};

/// Thrown when an event fails mid-trajectory; `index()` is the failing collision.
class TrajectoryError : public std::runtime_error
{
  public:
    TrajectoryError(std::int64_t index, const std::string& what)
        : std::runtime_error("event " + std::to_string(index) + ": " + what), index_(index)
    {}

    std::int64_t index() const noexcept { return index_; }

  private:
    std::int64_t index_;
};

using EventSink = std::function<void(const CollisionEvent&)>;

/// Runs events until the first satisfied stop rule, delivering each in order.
TrajectorySummary run_trajectory(const SimConfig& config, RngState& rng, const EventSink& sink);

}  // namespace rotwalk
