#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rotwalk::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1,  //!< runtime error or failed check
    exit_usage = 2,    //!< bad flags or configuration
};

struct CommonOptions
{
    std::string config_path;          //!< empty: defaults only
    std::vector<std::string> sets;    //!< dotted key=value overrides, applied in order
    std::optional<std::string> seed;  //!< overrides the config seed
    std::optional<long> workers;
    std::filesystem::path out = ".";
};

struct AnalyzeOptions
{
    std::vector<std::filesystem::path> inputs;
    std::vector<std::string> checks;
    std::optional<std::filesystem::path> langevin;  //!< samples for the growth-law comparison
};

/// Names accepted by --checks.
const std::vector<std::string>& known_checks();

int cmd_simulate(const CommonOptions& opt, std::ostream& out, std::ostream& err);
int cmd_ensemble(const CommonOptions& opt, long trajectories, bool aggregate_only,
                 std::ostream& out, std::ostream& err);
int cmd_langevin(const CommonOptions& opt, std::ostream& out, std::ostream& err);
int cmd_analyze(const CommonOptions& opt, const AnalyzeOptions& analyze, std::ostream& out,
                std::ostream& err);

/// Parses the command line and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rotwalk::cli
