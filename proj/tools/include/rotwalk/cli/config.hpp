#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rotwalk/dynamics.hpp"
#include "rotwalk/langevin.hpp"

namespace rotwalk::cli {

/// Parameters of the estimators run over simulated events.
struct AnalysisSettings
{
    double profile_lo = 1.0;
    double profile_hi = 1e6;
    std::size_t profile_bins = 36;
    double fit_lo = 100.0;  //!< burn-in radius for fits
    double fit_hi = 1e4;
    std::vector<double> time_thresholds{1e2, 1e3, 1e4};
};

struct RunConfig
{
    SimConfig sim;
    LangevinConfig langevin;
    AnalysisSettings analysis;
    nlohmann::json resolved;  //!< the document the fields were read from
};

/// Every recognized key with its default value.
nlohmann::json default_config();

/// Reads a JSON file and overlays it on the defaults. Unknown keys are rejected.
nlohmann::json load_config(const std::string& path);

/// Applies one `dotted.key=value` override. The value is read as JSON when it
/// parses and as a plain string otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Seed from decimal or 0x-prefixed hexadecimal text.
std::uint64_t parse_seed(std::string_view text);

/// Converts and validates a full document. Throws ConfigError naming the key.
RunConfig resolve(const nlohmann::json& doc);

}  // namespace rotwalk::cli
