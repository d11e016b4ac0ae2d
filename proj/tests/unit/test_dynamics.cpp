#include <cmath>
#include <vector>

#include "doctest.h"
#include "rotwalk/arclength.hpp"
#include "rotwalk/dynamics.hpp"
#include "rotwalk/error.hpp"
#include "rotwalk/geometry.hpp"

using namespace rotwalk;

namespace {

bool close(const Vec3& a, const Vec3& b, double tol)
{
    return norm(a - b) <= tol;
}

SimConfig reference_config(std::uint64_t seed, std::int64_t events)
{
    SimConfig c;
    c.seed = seed;
    c.stop.max_events = events;
    return c;
}

std::vector<CollisionEvent> collect(const SimConfig& c)
{
    std::vector<CollisionEvent> out;
    RngState rng(c.seed);
    run_trajectory(c, rng, [&](const CollisionEvent& ev) { out.push_back(ev); });
    return out;
}

}  // namespace

TEST_CASE("resolve_collision examples")
{
    CHECK(close(resolve_collision({2, 0, 0}, {}, {}, {0.5, 0, 0}), {1, 0, 0}, 1e-15));
    CHECK(close(resolve_collision({0, 3, 0}, {}, {}, {0.5, 0, 0}), {0, 1.5, 0}, 1e-15));
    const Vec3 w{0.3, -1.2, 0.7};
    CHECK(resolve_collision(w, {0.3, -1.0, 0.7}, {0.0, -0.2, 0.0}, {0.4, 0.1, 0.2}) ==
          Vec3{0.3, -1.2, 0.7});
}

TEST_CASE("advance with absorbing collisions")
{
    ParticleState s{{1, 0, 0}, {0, 1, 0}, 0.0, 0};
    const CollisionEvent ev = advance(s, 1.0, 2.0, {}, {});
    CHECK(ev.tau == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(close(ev.x, {1, 2, 0}, 1e-12));
    CHECK(close(ev.v_after, {-2, 1, 0}, 1e-12));
    CHECK(close(ev.u, {-2, 1, 0}, 1e-12));
    CHECK(norm(ev.e_after) <= 1e-12);
    CHECK(ev.k == 1);
    CHECK(s.k == 1);
    CHECK(s.t == doctest::Approx(2.0));
    CHECK(s.v == ev.v_after);

    ParticleState s2{{1, 0, 0}, {0, 1, 0}, 0.0, 0};
    const CollisionEvent ev2 = advance(s2, 1.0, 0.5, {}, {});
    CHECK(ev2.tau == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(close(ev2.x, {1, 1, 0}, 1e-12));
}

TEST_CASE("advance on the axis with the medium is an error")
{
    ParticleState s{{0, 0, 5}, {}, 0.0, 0};
    CHECK_THROWS_AS(advance(s, 1.0, 1.0, {}, {}), DomainError);
}

TEST_CASE("event invariants on a generic trajectory")
{
    const SimConfig c = reference_config(2024, 20000);
    const auto events = collect(c);
    REQUIRE(events.size() == 20000);
    Vec3 start = c.x0;
    double t = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i)
    {
        const auto& ev = events[i];
        REQUIRE(ev.k == static_cast<std::int64_t>(i + 1));
        REQUIRE(ev.tau > 0.0);
        REQUIRE(ev.t_before == t);
        REQUIRE(ev.t_after == doctest::Approx(ev.t_before + ev.tau).epsilon(1e-14));
        REQUIRE(close(ev.x, start + ev.tau * ev.v_before, 1e-9 * (1.0 + norm(ev.x))));
        REQUIRE(close(ev.u, field_at(c.omega, ev.x), 0.0));
        REQUIRE(close(ev.e_after, ev.v_after - ev.u, 1e-15 * norm(ev.u)));

        const Vec3 w = ev.u + ev.delta;
        const double before = norm(ev.v_before - w);
        const double after = norm(ev.e_after - ev.delta);
        REQUIRE(std::abs(after - before * norm(ev.eta)) <= 1e-12 * before);
        REQUIRE(after < before);

        const auto problem = ArcLengthProblem::from_state(c.omega, start, ev.v_before);
        REQUIRE(std::abs(arc_length(problem, ev.tau) - ev.xi) <= 1e-9 * (1.0 + ev.xi));

        start = ev.x;
        t = ev.t_after;
    }
}

TEST_CASE("run_trajectory stop rules")
{
    SimConfig c = reference_config(1, 1000);
    std::int64_t n = 0;
    RngState rng(c.seed);
    auto summary = run_trajectory(c, rng, [&](const CollisionEvent&) { ++n; });
    CHECK(n == 1000);
    CHECK(summary.events == 1000);
    CHECK(summary.reason == StopReason::max_events);

    c.stop = {};
    c.stop.max_time = 50.0;
    RngState rng2(c.seed);
    CollisionEvent last;
    summary = run_trajectory(c, rng2, [&](const CollisionEvent& ev) { last = ev; });
    CHECK(summary.reason == StopReason::max_time);
    CHECK(last.t_after >= 50.0);
    CHECK(last.t_before < 50.0);

    c.stop = {};
    c.stop.max_radius = 100.0;
    RngState rng3(c.seed);
    summary = run_trajectory(c, rng3, {});
    CHECK(summary.reason == StopReason::max_radius);
    CHECK(radial_distance(summary.final_state.x) >= 100.0);

    c.stop = {};
    c.stop.max_events = 0;
    RngState rng4(c.seed);
    CHECK(run_trajectory(c, rng4, {}).events == 0);
}

TEST_CASE("run_trajectory is deterministic")
{
    const SimConfig c = reference_config(99, 5000);
    CHECK(collect(c) == collect(c));
    SimConfig other = c;
    other.seed = 100;
    CHECK(collect(c) != collect(other));
}

TEST_CASE("run_trajectory validates the configuration")
{
    RngState rng(0);
    SimConfig c = reference_config(0, 10);
    c.omega = 0.0;
    CHECK_THROWS_AS(run_trajectory(c, rng, {}), ConfigError);
    c = reference_config(0, 10);
    c.lambda = -1.0;
    CHECK_THROWS_AS(run_trajectory(c, rng, {}), ConfigError);
    c = reference_config(0, 10);
    c.sigma = -0.1;
    CHECK_THROWS_AS(run_trajectory(c, rng, {}), ConfigError);
    c = reference_config(0, 10);
    c.eta.rho = 1.0;
    CHECK_THROWS_AS(run_trajectory(c, rng, {}), ConfigError);
    c = reference_config(0, 10);
    c.stop = {};
    try
    {
        run_trajectory(c, rng, {});
        FAIL("expected ConfigError");
    }
    catch (const ConfigError& e)
    {
        CHECK(e.key() == "stop");
    }
}

TEST_CASE("run_trajectory reports the failing event index")
{
    SimConfig c = reference_config(0, 10);
    c.x0 = {0, 0, 3};
    c.sigma = 0.0;
    c.eta = {EtaKind::absorbing, 0.0};
    RngState rng(0);
    try
    {
        run_trajectory(c, rng, {});
        FAIL("expected TrajectoryError");
    }
    catch (const TrajectoryError& e)
    {
        CHECK(e.index() == 1);
    }
}

TEST_CASE("radial distance grows over long trajectories")
{
    int grew = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        SimConfig c = reference_config(seed, 100000);
        RngState rng(seed);
        const auto summary = run_trajectory(c, rng, {});
        grew += radial_distance(summary.final_state.x) > radial_distance(c.x0) ? 1 : 0;
    }
    CHECK(grew == 100);
}

TEST_CASE("position_at")
{
    const ParticleState still{{1, 2, 3}, {}, 4.0, 0};
    CHECK(position_at(still, 10.0) == Vec3{1, 2, 3});
    const ParticleState moving{{}, {1, 2, 3}, 1.0, 0};
    CHECK(close(position_at(moving, 3.0), {2, 4, 6}, 1e-15));
    CHECK(position_at(moving, 1.0) == Vec3{});
    CHECK_THROWS_AS(position_at(moving, 0.5), DomainError);
}

TEST_CASE("stop reason names")
{
    CHECK(to_string(StopReason::max_events) == "max_events");
    CHECK(to_string(StopReason::max_time) == "max_time");
    CHECK(to_string(StopReason::max_radius) == "max_radius");
}
