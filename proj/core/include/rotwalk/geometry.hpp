#pragma once

#include "rotwalk/vec3.hpp"

namespace rotwalk {

//---------------------------------------------------------------------------//
// Rotating medium about the x3 axis with angular velocity omega > 0.
//---------------------------------------------------------------------------//

/// Medium velocity at `y`: (-omega*y2, omega*y1, 0).
constexpr Vec3 field_at(double omega, const Vec3& y) noexcept
{
    return {-omega * y.y, omega * y.x, 0.0};
}

/// Position at time `t` of the medium point that sat at `x` at time 0.
Vec3 rotate_point(double omega, const Vec3& x, double t) noexcept;

/// Distance from the rotation axis.
inline double radial_distance(const Vec3& x) noexcept { return std::hypot(x.x, x.y); }

/*!
 * Canonical rotation sending e1 = (1,0,0) to u/|u|.
 *
 * Among all proper rotations with that property this returns the minimal one,
 * i.e. the rotation about e1 x u by the angle between them. When u is
 * antiparallel to e1 the rotation by pi about (0,0,1) is returned.
 *
 * Throws DomainError("degenerate rotation target") for the zero vector.
 */
Mat3 rotation_to(const Vec3& u);

/// Height, radial and azimuthal parts of a velocity at a given position.
struct VelocityParts
{
    Vec3 height;
    Vec3 radial;
    Vec3 azimuth;
};

/// Throws DomainError when `x` is on the rotation axis.
VelocityParts decompose_velocity(const Vec3& x, const Vec3& v);

}  // namespace rotwalk
