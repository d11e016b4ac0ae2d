#include "rotwalk/arclength.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotwalk/error.hpp"
#include "rotwalk/geometry.hpp"

namespace rotwalk {
namespace {

constexpr double linear_threshold = 1e-14;
constexpr int max_iterations = 200;

// int_{lo}^{lo+width} sqrt(u^2 + h^2) du for lo >= 0, width >= 0, written
// without differences of large terms. The width is passed separately because
// lo + width loses its low bits when lo is large.
double hyperbolic_segment(double lo, double width, double h)
{
    if (width <= 0.0)
        return 0.0;
    const double hi = lo + width;
    const double r_lo = std::hypot(lo, h);
    const double r_hi = std::hypot(hi, h);
    // hi*r_hi - lo*r_lo
    double result = width * (r_hi + lo * (hi + lo) / (r_hi + r_lo));
    if (h > 0.0)
    {
        // asinh(hi/h) - asinh(lo/h)
        const double arg = width * (hi + lo) / (hi * r_lo + lo * r_hi);
        result += h * h * std::asinh(arg);
    }
    return 0.5 * result;
}

// int_{lo}^{lo+width} sqrt(u^2 + h^2) du for any lo.
double hyperbolic_integral(double lo, double width, double h)
{
    if (lo >= 0.0)
        return hyperbolic_segment(lo, width, h);
    if (lo + width <= 0.0)
        return hyperbolic_segment(-lo - width, width, h);
    return hyperbolic_segment(0.0, -lo, h) + hyperbolic_segment(0.0, lo + width, h);
}

}  // namespace

ArcLengthProblem::ArcLengthProblem(const Vec3& a, const Vec3& b) noexcept
    : a_(a), b_(b), a_norm_(norm(a)), b_norm_(norm(b))
{
    if (b_norm_ >= linear_threshold)
    {
        const double b2 = b_norm_ * b_norm_;
        u0_ = dot(a, b) / b2;
        h_ = norm(cross(a, b)) / b2;
    }
}

ArcLengthProblem ArcLengthProblem::from_state(double omega, const Vec3& x, const Vec3& v) noexcept
{
    return ArcLengthProblem(v - field_at(omega, x), -field_at(omega, v));
}

double arc_length(const ArcLengthProblem& p, double t)
{
    if (!(t > 0.0))
        return 0.0;
    if (p.b_norm_ < linear_threshold)
        return p.a_norm_ * t;
    return p.b_norm_ * hyperbolic_integral(p.u0_, t, p.h_);
}

double invert_arc_length(const ArcLengthProblem& p, double xi)
{
    if (p.degenerate())
        throw DomainError("particle permanently comoving on axis; no collision ever");
    if (!(xi > 0.0))
        return 0.0;

    const double an = p.a_norm_;
    const double bn = p.b_norm_;
    if (bn < linear_threshold)
        return xi / an;

    // D(t) >= |b| t^2 / 2 - |a| t, so this t already reaches xi.
    double hi = (an + std::sqrt(an * an + 2.0 * bn * xi)) / bn;
    double f_hi = arc_length(p, hi) - xi;
    int guard = 0;
    while (f_hi < 0.0)
    {
        hi *= 2.0;
        f_hi = arc_length(p, hi) - xi;
        if (++guard > 2000)
            throw ConvergenceError("clock inversion failed to converge");
    }

    double lo = 0.0;
    double t = hi;
    double f = f_hi;
    // Straight-line guess; tight whenever |b| t is small against |a|.
    if (an > 0.0 && xi / an < hi)
    {
        const double guess = xi / an;
        const double f_guess = arc_length(p, guess) - xi;
        if (f_guess >= 0.0)
        {
            t = guess;
            f = f_guess;
        }
        else
        {
            lo = guess;
        }
    }

    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + xi);
    for (int iter = 0; iter < max_iterations; ++iter)
    {
        if (std::abs(f) <= tol)
            return t;
        if (f > 0.0)
            hi = t;
        else
            lo = t;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi)
            return t;

        const double slope = p.speed(t);
        double next = slope > 0.0 ? t - f / slope : lo - 1.0;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        t = next;
        f = arc_length(p, t) - xi;
    }
    throw ConvergenceError("clock inversion failed to converge");
}

}  // namespace rotwalk
