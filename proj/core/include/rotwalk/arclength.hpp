#pragma once

#include "rotwalk/vec3.hpp"

namespace rotwalk {

/*!
 * Relative arc length of a straight flight through the rotating medium.
 *
 * A particle at x with velocity v sees the medium velocity F(x + s v), so its
 * relative velocity along the flight is a + s b with a = v - F(x) and
 * b = -F(v). The collision clock is D(t) = int_0^t |a + s b| ds.
 */
class ArcLengthProblem
{
  public:
    ArcLengthProblem(const Vec3& a, const Vec3& b) noexcept;

    /// Problem for a particle at `x` moving with `v` in a medium spinning at `omega`.
    static ArcLengthProblem from_state(double omega, const Vec3& x, const Vec3& v) noexcept;

    const Vec3& a() const noexcept { return a_; }
    const Vec3& b() const noexcept { return b_; }

    /// Quadratic coefficients of |a + s b|^2 = alpha s^2 + beta s + gamma.
    double alpha() const noexcept { return norm_sq(b_); }
    double beta() const noexcept { return 2.0 * dot(a_, b_); }
    double gamma() const noexcept { return norm_sq(a_); }

    /// Relative speed at flight time s.
    double speed(double s) const noexcept { return norm(a_ + s * b_); }

    /// True when a = b = 0 (no relative motion, ever).
    bool degenerate() const noexcept { return a_norm_ == 0.0 && b_norm_ == 0.0; }

  private:
    friend double arc_length(const ArcLengthProblem&, double);
    friend double invert_arc_length(const ArcLengthProblem&, double);

    Vec3 a_;
    Vec3 b_;
    double a_norm_;
    double b_norm_;
    // |a + s b| = |b| sqrt((s + u0)^2 + h^2), valid when |b| is not negligible.
    double u0_ = 0.0;
    double h_ = 0.0;
};

/// D(t) in closed form. Requires t >= 0.
double arc_length(const ArcLengthProblem& problem, double t);

/*!
 * Flight time tau with D(tau) = xi.
 *
 * Throws DomainError when the problem is degenerate and ConvergenceError
 * ("clock inversion failed to converge") past 200 iterations.
 */
double invert_arc_length(const ArcLengthProblem& problem, double xi);

}  // namespace rotwalk
