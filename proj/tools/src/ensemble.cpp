#include "rotwalk/cli/ensemble.hpp"

#include <cstdio>
#include <map>
#include <mutex>

#include "rotwalk/cli/workers.hpp"
#include "rotwalk/error.hpp"
#include "rotwalk/geometry.hpp"

namespace rotwalk::cli {

EnsembleAggregate::EnsembleAggregate(const RunConfig& config)
    : profile(RadialBinStats::geometric(config.analysis.profile_lo, config.analysis.profile_hi,
                                        config.analysis.profile_bins)),
      bracket(config.sim.omega, config.analysis.time_thresholds)
{}

void EnsembleAggregate::merge(const EnsembleAggregate& other)
{
    fluctuation.merge(other.fluctuation);
    profile.merge(other.profile);
    bracket.merge(other.bracket);
    trajectories.insert(trajectories.end(), other.trajectories.begin(), other.trajectories.end());
}

EnsembleAggregate run_one(const RunConfig& config, std::size_t index, EventWriter* writer)
{
    const SimConfig& sim = config.sim;
    EnsembleAggregate agg(config);
    agg.fluctuation.add_initial(norm(sim.v0 - field_at(sim.omega, sim.x0)));

    std::vector<double> radii;
    std::vector<double> ratios;
    Vec3 start = sim.x0;
    RngState rng = derive_stream(sim.seed, index);
    const TrajectorySummary summary = run_trajectory(sim, rng, [&](const CollisionEvent& ev) {
        agg.fluctuation.add(ev);
        agg.profile.add(start, ev);
        agg.bracket.add(start, ev);
        radii.push_back(radial_distance(ev.x));
        ratios.push_back(norm(ev.e_after) / norm(ev.u));
        start = ev.x;
        if (writer)
            writer->write(ev);
    });

    TrajectoryStats stats;
    stats.events = summary.events;
    stats.final_time = summary.final_state.t;
    stats.final_radius = radial_distance(summary.final_state.x);
    stats.reason = summary.reason;
    if (radii.size() >= 10000)
        stats.growth = growth_rate(radii);
    if (!ratios.empty())
        stats.alignment = alignment_median(ratios);
    agg.trajectories.push_back(stats);
    return agg;
}

std::string event_file_name(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "events_%06zu.csv", index);
    return buf;
}

EnsembleAggregate run_ensemble(const RunConfig& config, std::size_t n, std::size_t workers,
                               const std::optional<std::filesystem::path>& event_dir)
{
    EnsembleAggregate total(config);
    std::mutex mutex;
    std::map<std::size_t, EnsembleAggregate> pending;
    std::size_t next = 0;

    parallel_for(n, workers, [&](std::size_t i) {
        std::optional<EventWriter> writer;
        if (event_dir)
            writer.emplace(*event_dir / event_file_name(i));
        EnsembleAggregate part = run_one(config, i, writer ? &*writer : nullptr);
        if (writer)
            writer->close();

        std::lock_guard lock(mutex);
        pending.emplace(i, std::move(part));
        for (auto it = pending.find(next); it != pending.end(); it = pending.find(next))
        {
            total.merge(it->second);
            pending.erase(it);
            ++next;
        }
    });
    return total;
}

std::optional<PowerLawFit> fit_profile(const RadialBinStats& profile, const AnalysisSettings& s)
{
    try
    {
        return fit_power_law(profile, s.fit_lo, s.fit_hi);
    }
    catch (const DomainError&)
    {
        return std::nullopt;
    }
}

}  // namespace rotwalk::cli
