#include "rotwalk/geometry.hpp"

#include "rotwalk/error.hpp"

namespace rotwalk {

Vec3 rotate_point(double omega, const Vec3& x, double t) noexcept
{
    const double angle = omega * t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {x.x * c - x.y * s, x.y * c + x.x * s, x.z};
}

Mat3 rotation_to(const Vec3& u)
{
    const double len = norm(u);
    if (!(len > 0.0))
        throw DomainError("degenerate rotation target");

    const Vec3 dir = u * (1.0 / len);
    const double c = dir.x;
    // Unnormalized axis e1 x dir; its length is the sine of the angle.
    const Vec3 axis{0.0, -dir.z, dir.y};
    const double s2 = axis.y * axis.y + axis.z * axis.z;
    if (s2 < 1e-28)
        return c > 0.0 ? Mat3::identity() : Mat3{{-1, 0, 0, 0, -1, 0, 0, 0, 1}};

    // Rodrigues with K built from the raw axis: R = I + K + K^2 / (1 + c).
    // Near the antipode 1 + c cancels, so take it as s^2 / (1 - c) there.
    const double one_plus_c = c >= 0.0 ? 1.0 + c : s2 / (1.0 - c);
    const Mat3 k{{0.0, -axis.z, axis.y, axis.z, 0.0, -axis.x, -axis.y, axis.x, 0.0}};
    const Mat3 k2 = k * k;
    const double f = 1.0 / one_plus_c;
    Mat3 r = Mat3::identity();
    for (std::size_t i = 0; i < 9; ++i)
        r.m[i] += k.m[i] + f * k2.m[i];
    return r;
}

VelocityParts decompose_velocity(const Vec3& x, const Vec3& v)
{
    const double dr = radial_distance(x);
    if (!(dr > 0.0))
        throw DomainError("radial frame undefined on axis");

    const Vec3 rhat{x.x / dr, x.y / dr, 0.0};
    VelocityParts parts;
    parts.height = {0.0, 0.0, v.z};
    parts.radial = rhat * dot(v, rhat);
    parts.azimuth = {v.x - parts.radial.x, v.y - parts.radial.y, 0.0};
    return parts;
}

}  // namespace rotwalk
