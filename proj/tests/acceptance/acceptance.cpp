// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rotwalk/analysis.hpp"
#include "rotwalk/arclength.hpp"
#include "rotwalk/cli/config.hpp"
#include "rotwalk/cli/ensemble.hpp"
#include "rotwalk/cli/event_io.hpp"
#include "rotwalk/cli/workers.hpp"
#include "rotwalk/dynamics.hpp"
#include "rotwalk/geometry.hpp"
#include "rotwalk/langevin.hpp"

using namespace rotwalk;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Reference medium: omega = lambda = 1, sigma = 0.1, rho = 0.9, from (1,0,0) at rest.
cli::RunConfig reference_config(std::uint64_t seed, std::int64_t events)
{
    auto doc = cli::default_config();
    doc["seed"] = seed;
    doc["stop"]["max_events"] = events;
    return cli::resolve(doc);
}

struct LongRun
{
    std::vector<CollisionEvent> events;
    double seconds = 0.0;
};

const LongRun& long_run()
{
    static const LongRun run = [] {
        LongRun r;
        const auto start = Clock::now();
        const cli::RunConfig rc = reference_config(20240601, 1000000);
        r.events.reserve(1000000);
        RngState rng(rc.sim.seed);
        run_trajectory(rc.sim, rng, [&](const CollisionEvent& ev) { r.events.push_back(ev); });
        r.seconds = seconds_since(start);
        return r;
    }();
    return run;
}

const cli::EnsembleAggregate& seed_ensemble()
{
    static const cli::EnsembleAggregate agg = [] {
        const cli::RunConfig rc = reference_config(0xC0FFEE, 20000);
        return cli::run_ensemble(rc, 100, cli::resolve_workers(std::nullopt), std::nullopt);
    }();
    return agg;
}

//---------------------------------------------------------------------------//

Outcome lemma1_every_event()
{
    const auto start = Clock::now();
    const LongRun& run = long_run();
    const BoundReport r = check_lemma1(run.events, 1.0);
    const BoundReport co = check_lemma1_comoving(run.events, 1.0);
    const double secs = seconds_since(start);
    return {r.passed() && secs < 60.0,
            fmt("%zu of %zu events violate (fraction %.6f, worst excess %.3g); "
                "comoving-frame variant: %zu violations; %.1f s",
                r.violations, r.count, r.violation_fraction, r.max_excess, co.violations, secs)};
}

Outcome collision_norm_identity()
{
    const BoundReport r = check_collision_norm_identity(long_run().events, 1e-12);
    return {r.passed() && r.count == long_run().events.size(),
            fmt("%zu of %zu events off by more than 1e-12 relative (worst excess %.3g)", r.violations,
                r.count, r.max_excess)};
}

Outcome clock_oracle()
{
    const auto start = Clock::now();
    std::mt19937_64 gen(31337);
    std::uniform_real_distribution<double> t_dist(0.0, 10.0);
    double worst_quad = 0.0;
    for (int i = 0; i < 10000; ++i)
    {
        const ArcLengthProblem p = testing::random_problem(gen, i);
        const double t = t_dist(gen);
        const double closed = arc_length(p, t);
        const double oracle = testing::quadrature_arc_length(p.a(), p.b(), t, 1e-14 * (1.0 + closed));
        worst_quad = std::max(worst_quad, std::abs(closed - oracle) / std::max(1.0, oracle));
    }
    std::uniform_real_distribution<double> log_xi(-6.0, 3.0);
    double worst_trip = 0.0;
    for (int i = 0; i < 100000; ++i)
    {
        const ArcLengthProblem p = testing::random_problem(gen, i);
        const double xi = std::pow(10.0, log_xi(gen));
        const double tau = invert_arc_length(p, xi);
        worst_trip = std::max(worst_trip, std::abs(arc_length(p, tau) - xi) / (1.0 + xi));
    }
    const double secs = seconds_since(start);
    return {worst_quad <= 1e-10 && worst_trip <= 1e-9 && secs < 30.0,
            fmt("closed form vs quadrature worst %.2e (limit 1e-10); round trip worst %.2e "
                "(limit 1e-9 (1+xi)); %.1f s",
                worst_quad, worst_trip, secs)};
}

Outcome fluctuation_bound()
{
    const auto start = Clock::now();
    const cli::RunConfig rc = reference_config(0xF1A7, 10000);
    const auto agg = cli::run_ensemble(rc, 200, cli::resolve_workers(std::nullopt), std::nullopt);
    const BoundReport r = check_fluctuation_bound(agg.fluctuation, rc.sim);
    const double limit = prop1_bound(rc.sim.eta.mean_norm(), NoiseLaw{rc.sim.sigma}.mean_norm(),
                                     rc.sim.lambda, rc.sim.omega, 0.0, 0);
    const std::size_t last = agg.fluctuation.size() - 1;
    const double secs = seconds_since(start);
    return {r.passed() && secs < 600.0,
            fmt("%zu of %zu k exceed the bound (limit %.6f); mean |E_k| at k=100: %.3f, at k=%zu: %.3f; "
                "%.1f s",
                r.violations, r.count, limit, agg.fluctuation.mean(100), last,
                agg.fluctuation.mean(last), secs)};
}

Outcome radial_scaling()
{
    const auto& agg = seed_ensemble();
    const std::size_t events = agg.profile.total() + agg.profile.outside();
    const PowerLawFit fit = fit_power_law(agg.profile, 1e2, 1e4);

    // Negative control: drift linear in r, as the Langevin stipulation has it.
    RadialBinStats control = RadialBinStats::geometric(1.0, 1e6, 36);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> log_r(2.0, 4.0);
    std::normal_distribution<double> noise;
    for (int i = 0; i < 200000; ++i)
    {
        const double r = std::pow(10.0, log_r(gen));
        control.add(r, 0.1 * r + std::sqrt(r) * noise(gen), 1.0);
    }
    const PowerLawFit linear = fit_power_law(control, 1e2, 1e4);
    return {events >= 1000000 && fit.exponent >= 0.4 && fit.exponent <= 0.6 &&
                linear.exponent >= 0.95 && linear.exponent <= 1.05,
            fmt("exponent %.4f +/- %.4f over %zu bins from %zu events; linear-drift control %.4f",
                fit.exponent, fit.stderr, fit.bins_used, events, linear.exponent)};
}

Outcome time_bracket()
{
    const BoundReport r = check_collision_time_bounds(long_run().events, 1.0, {1e2, 1e3, 1e4});
    bool monotone = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        monotone = monotone && r.rows[i].observed <= r.rows[i - 1].observed;
    return {monotone && r.violation_fraction < 0.01,
            fmt("violation fraction %.4f / %.4f / %.4f beyond 1e2 / 1e3 / 1e4 (%zu flights at 1e4)",
                r.rows[0].observed, r.rows[1].observed, r.rows[2].observed, r.rows[2].samples)};
}

Outcome growth_and_alignment()
{
    const auto& agg = seed_ensemble();
    std::size_t positive = 0;
    double min_beta = INFINITY;
    double worst_alignment = 0.0;
    for (const auto& t : agg.trajectories)
    {
        if (t.growth && t.growth->beta_hat > 0.0)
            ++positive;
        if (t.growth)
            min_beta = std::min(min_beta, t.growth->beta_hat);
        worst_alignment = std::max(worst_alignment, t.alignment.value_or(INFINITY));
    }
    const double long_alignment = alignment_median(long_run().events);
    return {positive == 100 && worst_alignment < 0.05 && long_alignment < 0.05,
            fmt("beta_hat > 0 on %zu of 100 seeds (min %.4f); alignment median worst seed %.4f, "
                "1e6-event run %.5f",
                positive, min_beta, worst_alignment, long_alignment)};
}

/// Smallest z in [1, 1e12] (to a factor 1.01) above which `passes(z)` holds,
/// assuming monotonicity; nullopt if it fails at the top.
std::optional<double> locate_threshold(const std::function<bool(double)>& passes)
{
    double lo = 0.0, hi = 12.0;
    if (!passes(std::pow(10.0, hi)))
        return std::nullopt;
    if (passes(1.0))
        return 1.0;
    while (hi - lo > 0.004)
    {
        const double mid = 0.5 * (lo + hi);
        (passes(std::pow(10.0, mid)) ? hi : lo) = mid;
    }
    return std::pow(10.0, hi);
}

Outcome lemma_thresholds()
{
    const double e_max = 2.57;
    std::mt19937_64 gen(2718);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> unit;

    // Probe set: the six frame directions plus random ones, two magnitudes, three azimuths.
    std::vector<Vec3> dirs{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (int i = 0; i < 64; ++i)
    {
        Vec3 d{g(gen), g(gen), g(gen)};
        dirs.push_back(d * (1.0 / norm(d)));
    }
    const std::vector<double> azimuths{0.0, 1.0, 2.5};
    const std::vector<double> xis{1e-3, 0.5, 1.0, 2.0, 4.0, 10.0, 50.0, 100.0};
    auto probe = [&](double z, const std::function<bool(const Vec3&, const Vec3&)>& ok) {
        for (double phi : azimuths)
        {
            const Vec3 x{z * std::cos(phi), z * std::sin(phi), 0.0};
            // Express frame directions in the local (radial, azimuthal, axial) basis.
            const Vec3 radial{std::cos(phi), std::sin(phi), 0.0};
            const Vec3 azimuthal{-std::sin(phi), std::cos(phi), 0.0};
            for (const Vec3& d : dirs)
                for (double m : {e_max, 0.5 * e_max})
                {
                    const Vec3 e = m * (d.x * radial + d.y * azimuthal + Vec3{0, 0, d.z});
                    if (!ok(x, e))
                        return false;
                }
        }
        return true;
    };
    auto lemma2_ok = [](const Vec3& x, const Vec3& e) {
        return check_lemma2_instance(x, e, 1.0, 1.0).passes;
    };
    auto lemma3_ok = [&](const Vec3& x, const Vec3& e) {
        for (double xi : xis)
            if (!check_lemma3_instance(x, e, xi, 1.0).passes)
                return false;
        return true;
    };
    const auto z1 = locate_threshold([&](double z) { return probe(z, lemma2_ok); });
    const auto z2 = locate_threshold([&](double z) { return probe(z, lemma3_ok); });
    if (!z1 || !z2)
        return {false, "no threshold found below 1e12"};
    const double n1 = 2.0 * *z1;
    const double n2 = 2.0 * *z2;

    auto random_instance = [&](double n, Vec3& x, Vec3& e) {
        const double z = n * std::pow(10.0, 6.0 * unit(gen));
        const double phi = 2.0 * std::numbers::pi * unit(gen);
        x = {z * std::cos(phi), z * std::sin(phi), 20.0 * (unit(gen) - 0.5)};
        Vec3 d{g(gen), g(gen), g(gen)};
        e = (e_max * std::cbrt(unit(gen)) / norm(d)) * d;
    };
    std::size_t fail2 = 0, fail3 = 0;
    for (int i = 0; i < 10000; ++i)
    {
        Vec3 x, e;
        random_instance(n1, x, e);
        fail2 += check_lemma2_instance(x, e, 1.0, 1.0).passes ? 0 : 1;
        random_instance(n2, x, e);
        const double xi = 100.0 * (1.0 - unit(gen));
        fail3 += check_lemma3_instance(x, e, xi, 1.0).passes ? 0 : 1;
    }
    return {fail2 == 0 && fail3 == 0,
            fmt("N1 = %.4g, N2 = %.4g (located %.4g, %.4g, padded x2); failures above threshold: "
                "arc and radial gain %zu / 10000, minimum arc %zu / 10000",
                n1, n2, *z1, *z2, fail2, fail3)};
}

Outcome comparison_variable()
{
    const auto start = Clock::now();
    const auto [c, p] = cramer_constants(1.0, 1.0);
    const double mean = cramer_mean_Y(p, c, 1.0, 1.0);
    const double mgf0 = cramer_mgf_Y(0.0, p, c, 1.0, 1.0);
    const double mgf1 = cramer_mgf_Y(1.0, p, c, 1.0, 1.0);
    // Independent high-precision evaluation of the closed-form mean.
    const double oracle_mean = 0.005678774854273;

    RngState rng = derive_stream(99, 0);
    const double c2 = c * c;
    const long n = 10000000;
    double s = 0, ss = 0, m = 0, mm = 0;
    for (long i = 0; i < n; ++i)
    {
        const double xi = sample_xi(rng, PathLengthLaw{1.0});
        const bool bad = rng.uniform() < p;
        const double y = (!bad && xi > c2) ? c2 / 6.0 : -xi;
        s += y;
        ss += y * y;
        const double ey = std::exp(y);
        m += ey;
        mm += ey * ey;
    }
    const double mc = s / n;
    const double se = std::sqrt((ss / n - mc * mc) / n);
    const double mc_mgf = m / n;
    const double mgf_se = std::sqrt((mm / n - mc_mgf * mc_mgf) / n);
    const double secs = seconds_since(start);
    const bool pass = mgf0 == 1.0 && mean > 0.0 && std::abs(mean - oracle_mean) <= 1e-12 &&
                      std::abs(mc - mean) <= 3.0 * se && std::abs(mc_mgf - mgf1) <= 3.0 * mgf_se &&
                      secs < 60.0;
    return {pass, fmt("p = %.12f, E[Y] = %.12f (oracle %.12f), MGF(0) = %.17g; Monte Carlo mean "
                      "%.6f (%.2f se), MGF(1) %.6f vs %.6f (%.2f se); %.1f s",
                      p, mean, oracle_mean, mgf0, mc, std::abs(mc - mean) / se, mc_mgf, mgf1,
                      std::abs(mc_mgf - mgf1) / mgf_se, secs)};
}

Outcome langevin_comparator()
{
    LangevinConfig quiet;
    quiet.noise_scale = 0.0;
    quiet.step = 1e-5;
    quiet.max_time = 1.0;
    RngState unused(0);
    const auto end = integrate(quiet, unused, {}).final_sample;
    const auto exact = langevin_exact_mean(quiet, 1.0);
    const double rel = std::hypot(end.x[0] - exact[0], end.x[1] - exact[1]) / std::hypot(exact[0], exact[1]);

    double rate = 0.0;
    std::vector<RadiusSample> first;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        LangevinConfig c;
        c.seed = seed;
        std::vector<RadiusSample> samples;
        RngState rng(seed);
        integrate(c, rng, [&](const LangevinSample& s) { samples.push_back({s.t, s.radius()}); });
        rate += fit_growth_laws(samples).exponential.slope / 50.0;
        if (seed == 0)
            first = samples;
    }

    std::vector<RadiusSample> collision;
    const auto& events = long_run().events;
    for (std::size_t i = 9; i < events.size(); i += 10)
        collision.push_back({events[i].t_after, radial_distance(events[i].x)});
    const GrowthComparison cmp = compare_growth(collision, first);
    const double exponent = cmp.collision.polynomial.slope;

    const bool pass = rel <= 1e-3 && std::abs(rate - 0.1) <= 0.02 &&
                      cmp.langevin.winner == GrowthLaw::exponential &&
                      cmp.collision.winner == GrowthLaw::polynomial && std::abs(exponent - 2.0) <= 0.3;
    return {pass, fmt("noiseless endpoint off by %.2e relative; mean exponential rate %.4f over 50 seeds; "
                      "langevin -> %s, collision -> %s with time exponent %.3f",
                      rel, rate, to_string(cmp.langevin.winner), to_string(cmp.collision.winner),
                      exponent)};
}

std::string fingerprint(const cli::EnsembleAggregate& agg)
{
    std::string s;
    for (std::size_t k = 0; k < agg.fluctuation.size(); ++k)
    {
        cli::append_double(s, agg.fluctuation.mean(k));
        cli::append_double(s, agg.fluctuation.stderr_of_mean(k));
    }
    for (const auto& b : agg.profile.bins())
    {
        s += std::to_string(b.count);
        cli::append_double(s, b.mean);
        cli::append_double(s, b.m2);
        cli::append_double(s, b.mean_tau);
    }
    for (std::size_t i = 0; i < 3; ++i)
        s += std::to_string(agg.bracket.below_lower(i)) + "," + std::to_string(agg.bracket.above_upper(i));
    for (const auto& t : agg.trajectories)
    {
        cli::append_double(s, t.final_radius);
        cli::append_double(s, t.final_time);
        cli::append_double(s, t.alignment.value_or(0.0));
    }
    return s;
}

Outcome reproducibility()
{
    auto log_of = [] {
        const cli::RunConfig rc = reference_config(4242, 100000);
        std::string log;
        RngState rng(rc.sim.seed);
        run_trajectory(rc.sim, rng, [&](const CollisionEvent& ev) {
            cli::format_event(log, ev);
            log.push_back('\n');
        });
        return log;
    };
    const std::string a = log_of();
    const std::string b = log_of();

    const cli::RunConfig rc = reference_config(77, 2000);
    const std::string one = fingerprint(cli::run_ensemble(rc, 100, 1, std::nullopt));
    const std::string four = fingerprint(cli::run_ensemble(rc, 100, 4, std::nullopt));
    const std::string seven = fingerprint(cli::run_ensemble(rc, 100, 7, std::nullopt));
    return {a == b && one == four && one == seven,
            fmt("event logs %s (%zu bytes); ensemble aggregates for 1 / 4 / 7 workers %s",
                a == b ? "identical" : "DIFFER", a.size(),
                one == four && one == seven ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"field change bounded by path length, 1e6-event run", lemma1_every_event},
        {"collision norm identity to 1e-12 relative", collision_norm_identity},
        {"clock closed form and inversion against quadrature", clock_oracle},
        {"mean fluctuation below its bound, 200 x 1e4 events", fluctuation_bound},
        {"radial velocity scales as sqrt(radius); linear control", radial_scaling},
        {"collision-time bracket beyond 1e2 / 1e3 / 1e4", time_bracket},
        {"linear growth on 100 seeds and velocity alignment", growth_and_alignment},
        {"finite radius thresholds for short-flight arc and gain", lemma_thresholds},
        {"comparison variable closed forms and Monte Carlo", comparison_variable},
        {"Langevin comparator and growth-law contrast", langevin_comparator},
        {"bit-identical logs and worker-independent aggregates", reproducibility},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.count(id))
            continue;
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  criterion %2d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id,
                    criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
