#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "rotwalk/analysis.hpp"
#include "rotwalk/cli/config.hpp"
#include "rotwalk/cli/event_io.hpp"

namespace rotwalk::cli {

struct TrajectoryStats
{
    std::int64_t events = 0;
    double final_time = 0.0;
    double final_radius = 0.0;
    StopReason reason = StopReason::max_events;
    std::optional<GrowthEstimate> growth;  //!< empty when the run is too short
    std::optional<double> alignment;       //!< empty without events
};

/// Fold-style statistics of one or more trajectories.
struct EnsembleAggregate
{
    explicit EnsembleAggregate(const RunConfig& config);

    /// Appends `other`; merging in trajectory order makes results independent
    /// of how trajectories were scheduled.
    void merge(const EnsembleAggregate& other);

    FluctuationAccumulator fluctuation;
    RadialBinStats profile;
    TimeBracketAccumulator bracket;
    std::vector<TrajectoryStats> trajectories;
};

/// Runs trajectory `index` on derive_stream(seed, index), optionally logging events.
EnsembleAggregate run_one(const RunConfig& config, std::size_t index, EventWriter* writer);

/// Runs `n` trajectories on up to `workers` threads. With `event_dir` set,
/// trajectory i is logged to event_dir / event_file_name(i).
EnsembleAggregate run_ensemble(const RunConfig& config, std::size_t n, std::size_t workers,
                               const std::optional<std::filesystem::path>& event_dir);

std::string event_file_name(std::size_t index);

/// Fits the profile over [fit_lo, fit_hi], or nothing if too few bins are populated.
std::optional<PowerLawFit> fit_profile(const RadialBinStats& profile, const AnalysisSettings& s);

}  // namespace rotwalk::cli
