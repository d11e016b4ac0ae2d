#pragma once

#include <array>
#include <cstdint>

#include "rotwalk/vec3.hpp"

namespace rotwalk {

/*!
 * Seedable 256-bit generator (xoshiro256**).
 *
 * Streams are keyed by (master seed, trajectory index) through SplitMix64, so
 * a trajectory's samples depend only on its own key and not on scheduling.
 * All transforms below are written out explicitly so sample sequences are
 * bit-identical across standard library implementations.
 */
class RngState
{
  public:
    using State = std::array<std::uint64_t, 4>;

    /// Single-stream generator keyed by `seed` (same as derive_stream(seed, 0)).
    explicit RngState(std::uint64_t seed = 0) noexcept;

    static RngState from_words(const State& words) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal (Marsaglia polar method, one value per call).
    double normal() noexcept;

    const State& words() const noexcept { return s_; }

    friend bool operator==(const RngState&, const RngState&) = default;

  private:
    RngState(const State& words, int) noexcept : s_(words) {}

    State s_{};
};

/// Independent, reproducible stream for one trajectory of an ensemble.
RngState derive_stream(std::uint64_t master_seed, std::uint64_t trajectory_index) noexcept;

//---------------------------------------------------------------------------//
// Input laws
//---------------------------------------------------------------------------//

enum class EtaKind
{
    uniform_ball,  //!< uniform on the closed ball of radius rho
    absorbing,     //!< eta == 0: the particle leaves with the medium velocity
};

/// Law of the normalized scattering velocity eta (support inside the unit ball).
struct EtaLaw
{
    EtaKind kind = EtaKind::uniform_ball;
    double rho = 0.9;

    /// E|eta|.
    double mean_norm() const noexcept;

    /// Throws ConfigError("eta.rho", ...) when rho is not in (0, 1).
    void validate() const;
};

/// Isotropic thermal noise: three iid N(0, sigma^2) coordinates.
struct NoiseLaw
{
    double sigma = 0.1;

    /// E|Delta| = 2 sigma sqrt(2/pi).
    double mean_norm() const noexcept;
};

/// Exponential path length between collisions.
struct PathLengthLaw
{
    double lambda = 1.0;

    double mean() const noexcept { return 1.0 / lambda; }
};

Vec3 sample_eta(RngState& rng, const EtaLaw& law) noexcept;
Vec3 sample_delta(RngState& rng, const NoiseLaw& law) noexcept;
double sample_xi(RngState& rng, const PathLengthLaw& law) noexcept;

/// Inverse CDF of Exp(lambda) at u in [0, 1).
double exponential_quantile(double u, double lambda) noexcept;

}  // namespace rotwalk
