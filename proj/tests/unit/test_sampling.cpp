#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rotwalk/error.hpp"
#include "rotwalk/sampling.hpp"

using namespace rotwalk;

TEST_CASE("derive_stream is deterministic and index-dependent")
{
    RngState a = derive_stream(42, 0);
    RngState b = derive_stream(42, 0);
    RngState c = derive_stream(42, 1);
    int differ = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto x = a.next_u64();
        REQUIRE(x == b.next_u64());
        differ += x != c.next_u64() ? 1 : 0;
    }
    CHECK(differ == 1000);
    CHECK(RngState(42) == derive_stream(42, 0));
}

TEST_CASE("distinct streams are uncorrelated")
{
    RngState a = derive_stream(7, 3);
    RngState b = derive_stream(7, 4);
    const int n = 100000;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int i = 0; i < n; ++i)
    {
        const double x = a.uniform();
        const double y = b.uniform();
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
    CHECK(std::abs(r) < 0.01);
}

TEST_CASE("uniform stays in [0, 1)")
{
    RngState rng(1);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("eta: support, mean norm and symmetry")
{
    const EtaLaw law{EtaKind::uniform_ball, 0.9};
    CHECK(law.mean_norm() == doctest::Approx(0.675));
    RngState rng(11);
    const int n = 1000000;
    double sum_norm = 0;
    Vec3 sum{};
    Vec3 sum_sq{};
    for (int i = 0; i < n; ++i)
    {
        const Vec3 s = sample_eta(rng, law);
        const double r = norm(s);
        REQUIRE(r <= 0.9);
        sum_norm += r;
        sum += s;
        sum_sq += Vec3{s.x * s.x, s.y * s.y, s.z * s.z};
    }
    CHECK(std::abs(sum_norm / n - 0.675) <= 0.001);
    // Per-coordinate variance of the uniform ball is rho^2 / 5.
    const double se = std::sqrt(0.81 / 5.0 / n);
    CHECK(std::abs(sum.x / n) <= 3 * se);
    CHECK(std::abs(sum.y / n) <= 3 * se);
    CHECK(std::abs(sum.z / n) <= 3 * se);
    CHECK(std::abs(sum_sq.z / n - 0.81 / 5.0) <= 1e-3);
}

TEST_CASE("eta stays strictly inside the unit ball over 1e7 samples")
{
    RngState rng(12);
    const EtaLaw law{};
    double worst = 0;
    for (int i = 0; i < 10000000; ++i)
        worst = std::max(worst, norm_sq(sample_eta(rng, law)));
    CHECK(std::sqrt(worst) < 1.0);
}

TEST_CASE("absorbing eta law")
{
    RngState rng(1);
    const EtaLaw law{EtaKind::absorbing, 0.0};
    CHECK(sample_eta(rng, law) == Vec3{});
    CHECK(law.mean_norm() == 0.0);
    CHECK_NOTHROW(law.validate());
    CHECK_THROWS_AS((EtaLaw{EtaKind::uniform_ball, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((EtaLaw{EtaKind::uniform_ball, 0.0}.validate()), ConfigError);
}

TEST_CASE("delta: zero sigma, variance and mean norm")
{
    RngState rng(5);
    for (int i = 0; i < 100; ++i)
        REQUIRE(sample_delta(rng, NoiseLaw{0.0}) == Vec3{});

    const NoiseLaw law{0.1};
    // chi distribution with 3 dof: E|Delta| = 2 sigma sqrt(2/pi).
    const double mean_norm = 2.0 * 0.1 * std::sqrt(2.0 / std::numbers::pi);
    CHECK(law.mean_norm() == doctest::Approx(mean_norm));
    CHECK(std::abs(mean_norm - 0.15958) < 1e-5);

    const int n = 1000000;
    double sx = 0, sxx = 0, snorm = 0;
    for (int i = 0; i < n; ++i)
    {
        const Vec3 d = sample_delta(rng, law);
        sx += d.y;
        sxx += d.y * d.y;
        snorm += norm(d);
    }
    const double var = sxx / n - (sx / n) * (sx / n);
    CHECK(std::abs(var - 0.01) <= 1e-4);
    CHECK(std::abs(snorm / n - mean_norm) <= 5e-4);
}

TEST_CASE("xi: inverse CDF, mean, tail and Kolmogorov-Smirnov")
{
    CHECK(exponential_quantile(0.5, 2.0) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-15));
    CHECK(std::abs(exponential_quantile(0.5, 2.0) - 0.346574) < 1e-6);

    RngState rng(21);
    const PathLengthLaw law{1.0};
    const int n = 1000000;
    double sum = 0;
    int tail = 0;
    for (int i = 0; i < n; ++i)
    {
        const double xi = sample_xi(rng, law);
        REQUIRE(xi > 0.0);
        sum += xi;
        tail += xi > 1.0 ? 1 : 0;
    }
    CHECK(std::abs(sum / n - 1.0) <= 0.003);
    CHECK(std::abs(static_cast<double>(tail) / n - std::exp(-1.0)) <= 0.0015);

    const double lambda = 2.5;
    std::vector<double> xs(100000);
    for (auto& x : xs)
        x = sample_xi(rng, PathLengthLaw{lambda});
    std::sort(xs.begin(), xs.end());
    double d = 0;
    const auto m = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double cdf = 1.0 - std::exp(-lambda * xs[i]);
        d = std::max({d, std::abs(cdf - i / m), std::abs((i + 1) / m - cdf)});
    }
    // Asymptotic critical value at alpha = 0.001.
    const double critical = std::sqrt(-0.5 * std::log(0.001 / 2.0)) / std::sqrt(m);
    CHECK(d < critical);
}
