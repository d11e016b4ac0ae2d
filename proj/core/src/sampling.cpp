#include "rotwalk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotwalk/error.hpp"

namespace rotwalk {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngState::State keyed_words(std::uint64_t seed, std::uint64_t index) noexcept
{
    // Mix the index first so that (seed, i) and (seed + c, i - c) differ.
    std::uint64_t idx = index;
    std::uint64_t key = seed ^ splitmix64(idx);
    RngState::State s{};
    for (auto& w : s)
        w = splitmix64(key);
    if ((s[0] | s[1] | s[2] | s[3]) == 0)
        s[0] = 1;
    return s;
}

}  // namespace

RngState::RngState(std::uint64_t seed) noexcept : s_(keyed_words(seed, 0)) {}

RngState RngState::from_words(const State& words) noexcept
{
    return RngState(words, 0);
}

std::uint64_t RngState::next_u64() noexcept
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngState::uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::normal() noexcept
{
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

RngState derive_stream(std::uint64_t master_seed, std::uint64_t trajectory_index) noexcept
{
    return RngState::from_words(keyed_words(master_seed, trajectory_index));
}

double EtaLaw::mean_norm() const noexcept
{
    return kind == EtaKind::absorbing ? 0.0 : 0.75 * rho;
}

void EtaLaw::validate() const
{
    if (kind == EtaKind::uniform_ball && !(rho > 0.0 && rho < 1.0))
        throw ConfigError("eta.rho", "eta.rho must lie in (0, 1)");
}

double NoiseLaw::mean_norm() const noexcept
{
    return 2.0 * sigma * std::sqrt(2.0 / std::numbers::pi);
}

Vec3 sample_eta(RngState& rng, const EtaLaw& law) noexcept
{
    if (law.kind == EtaKind::absorbing)
        return {};
    // Uniform direction from (cos theta, phi), radius by inverse CDF.
    const double cos_theta = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double r = law.rho * std::cbrt(rng.uniform());
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    return {r * sin_theta * std::cos(phi), r * sin_theta * std::sin(phi), r * cos_theta};
}

Vec3 sample_delta(RngState& rng, const NoiseLaw& law) noexcept
{
    if (law.sigma == 0.0)
        return {};
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    return {law.sigma * x, law.sigma * y, law.sigma * z};
}

double exponential_quantile(double u, double lambda) noexcept
{
    return -std::log1p(-u) / lambda;
}

double sample_xi(RngState& rng, const PathLengthLaw& law) noexcept
{
    double xi = 0.0;
    while (!(xi > 0.0))
        xi = exponential_quantile(rng.uniform(), law.lambda);
    return xi;
}

}  // namespace rotwalk
