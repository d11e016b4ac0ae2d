#include "rotwalk/cli/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "rotwalk/error.hpp"

namespace rotwalk::cli {

using nlohmann::json;

json default_config()
{
    return {
        {"omega", 1.0},
        {"lambda", 1.0},
        {"sigma", 0.1},
        {"eta", {{"kind", "uniform_ball"}, {"rho", 0.9}}},
        {"x0", {1.0, 0.0, 0.0}},
        {"v0", {0.0, 0.0, 0.0}},
        {"seed", 0},
        {"stop", {{"max_events", 10000}, {"max_time", nullptr}, {"max_radius", nullptr}}},
        {"langevin",
         {{"rotation_rate", 1.0},
          {"drift_gain", 0.1},
          {"noise_scale", 1.0},
          {"step", 1e-3},
          {"x0", {1.0, 0.0}},
          {"max_time", 100.0},
          {"stride", 100}}},
        {"analysis",
         {{"profile_lo", 1.0},
          {"profile_hi", 1e6},
          {"profile_bins", 36},
          {"fit_lo", 100.0},
          {"fit_hi", 1e4},
          {"time_thresholds", {1e2, 1e3, 1e4}}}},
    };
}

namespace {

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

void overlay(json& base, const json& patch, const std::string& prefix)
{
    if (!patch.is_object())
        throw ConfigError(prefix.empty() ? "config" : prefix,
                          (prefix.empty() ? std::string("config") : prefix) + " must be an object");
    for (const auto& [key, value] : patch.items())
    {
        const std::string path = join(prefix, key);
        if (!base.contains(key))
            throw ConfigError(path, "unknown config key " + path);
        if (base[key].is_object())
            overlay(base[key], value, path);
        else
            base[key] = value;
    }
}

double number(const json& doc, const std::string& path)
{
    if (!doc.is_number())
        throw ConfigError(path, path + " must be a number");
    return doc.get<double>();
}

std::optional<double> optional_number(const json& doc, const std::string& path)
{
    if (doc.is_null())
        return std::nullopt;
    return number(doc, path);
}

std::int64_t integer(const json& doc, const std::string& path)
{
    if (doc.is_number_integer())
        return doc.get<std::int64_t>();
    if (doc.is_number_float())
    {
        const double d = doc.get<double>();
        if (d == std::floor(d) && std::abs(d) < 9e15)
            return static_cast<std::int64_t>(d);
    }
    throw ConfigError(path, path + " must be an integer");
}

template<std::size_t N>
std::array<double, N> vector_of(const json& doc, const std::string& path)
{
    if (!doc.is_array() || doc.size() != N)
        throw ConfigError(path, path + " must be an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i)
        out[i] = number(doc[i], path + "." + std::to_string(i));
    return out;
}

Vec3 vec3_of(const json& doc, const std::string& path)
{
    const auto a = vector_of<3>(doc, path);
    return {a[0], a[1], a[2]};
}

std::uint64_t seed_of(const json& doc)
{
    if (doc.is_number_unsigned())
        return doc.get<std::uint64_t>();
    if (doc.is_number_integer() && doc.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(doc.get<std::int64_t>());
    if (doc.is_string())
        return parse_seed(doc.get<std::string>());
    throw ConfigError("seed", "seed must be a nonnegative 64-bit integer");
}

}  // namespace

json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open config file " + path);
    json patch;
    try
    {
        patch = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError("config", path + ": " + e.what());
    }
    json doc = default_config();
    overlay(doc, patch, "");
    return doc;
}

void apply_override(json& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("set", "override must look like key=value, got " + std::string(assignment));
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    json* node = &doc;
    std::string walked;
    std::size_t pos = 0;
    for (;;)
    {
        const auto dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        walked = join(walked, part);
        if (node->is_object() && node->contains(part))
            node = &(*node)[part];
        else if (node->is_array())
        {
            std::size_t index = 0;
            const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), index);
            if (ec != std::errc{} || end != part.data() + part.size() || index >= node->size())
                throw ConfigError(key, "unknown config key " + key);
            node = &(*node)[index];
        }
        else
            throw ConfigError(key, "unknown config key " + key);
        if (dot == std::string::npos)
            break;
        pos = dot + 1;
    }

    json value;
    try
    {
        value = json::parse(text);
    }
    catch (const json::parse_error&)
    {
        value = text;
    }
    if (node->is_object())
    {
        json replacement = *node;
        overlay(replacement, value, key);
        *node = std::move(replacement);
    }
    else
        *node = std::move(value);
}

std::uint64_t parse_seed(std::string_view text)
{
    int base = 10;
    if (text.starts_with("0x") || text.starts_with("0X"))
    {
        text.remove_prefix(2);
        base = 16;
    }
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed, base);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
        throw ConfigError("seed", "seed must be a 64-bit integer in decimal or 0x-hex");
    return seed;
}

RunConfig resolve(const json& doc)
{
    RunConfig rc;
    rc.resolved = doc;
    SimConfig& s = rc.sim;
    s.omega = number(doc.at("omega"), "omega");
    s.lambda = number(doc.at("lambda"), "lambda");
    s.sigma = number(doc.at("sigma"), "sigma");

    const json& eta = doc.at("eta");
    if (!eta.at("kind").is_string())
        throw ConfigError("eta.kind", "eta.kind must be a string");
    const auto kind = eta.at("kind").get<std::string>();
    if (kind == "uniform_ball")
        s.eta.kind = EtaKind::uniform_ball;
    else if (kind == "absorbing")
        s.eta.kind = EtaKind::absorbing;
    else
        throw ConfigError("eta.kind", "eta.kind must be uniform_ball or absorbing");
    s.eta.rho = number(eta.at("rho"), "eta.rho");

    s.x0 = vec3_of(doc.at("x0"), "x0");
    s.v0 = vec3_of(doc.at("v0"), "v0");
    s.seed = seed_of(doc.at("seed"));

    const json& stop = doc.at("stop");
    if (!stop.at("max_events").is_null())
        s.stop.max_events = integer(stop.at("max_events"), "stop.max_events");
    s.stop.max_time = optional_number(stop.at("max_time"), "stop.max_time");
    s.stop.max_radius = optional_number(stop.at("max_radius"), "stop.max_radius");
    s.validate();

    const json& lv = doc.at("langevin");
    LangevinConfig& l = rc.langevin;
    l.rotation_rate = number(lv.at("rotation_rate"), "langevin.rotation_rate");
    l.drift_gain = number(lv.at("drift_gain"), "langevin.drift_gain");
    l.noise_scale = number(lv.at("noise_scale"), "langevin.noise_scale");
    l.step = number(lv.at("step"), "langevin.step");
    l.x0 = vector_of<2>(lv.at("x0"), "langevin.x0");
    l.max_time = number(lv.at("max_time"), "langevin.max_time");
    l.stride = integer(lv.at("stride"), "langevin.stride");
    l.seed = s.seed;
    try
    {
        l.validate();
    }
    catch (const ConfigError& e)
    {
        throw ConfigError("langevin." + e.key(), std::string("langevin.") + e.what());
    }

    const json& an = doc.at("analysis");
    AnalysisSettings& a = rc.analysis;
    a.profile_lo = number(an.at("profile_lo"), "analysis.profile_lo");
    a.profile_hi = number(an.at("profile_hi"), "analysis.profile_hi");
    const auto bins = integer(an.at("profile_bins"), "analysis.profile_bins");
    if (bins < 1)
        throw ConfigError("analysis.profile_bins", "analysis.profile_bins must be at least 1");
    a.profile_bins = static_cast<std::size_t>(bins);
    if (!(a.profile_lo > 0.0) || !(a.profile_hi > a.profile_lo))
        throw ConfigError("analysis.profile_lo", "analysis.profile_lo must satisfy 0 < profile_lo < profile_hi");
    a.fit_lo = number(an.at("fit_lo"), "analysis.fit_lo");
    a.fit_hi = number(an.at("fit_hi"), "analysis.fit_hi");
    const json& th = an.at("time_thresholds");
    if (!th.is_array())
        throw ConfigError("analysis.time_thresholds", "analysis.time_thresholds must be an array");
    a.time_thresholds.clear();
    for (std::size_t i = 0; i < th.size(); ++i)
        a.time_thresholds.push_back(number(th[i], "analysis.time_thresholds." + std::to_string(i)));
    return rc;
}

}  // namespace rotwalk::cli
