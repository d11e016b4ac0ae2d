#pragma once

#include <array>
#include <cmath>

namespace rotwalk {

/// Point or velocity in 3-space.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) noexcept
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) noexcept
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) noexcept
    {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) noexcept
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) noexcept { return std::hypot(a.x, a.y, a.z); }

constexpr double norm_sq(const Vec3& a) noexcept { return dot(a, a); }

inline bool is_finite(const Vec3& a) noexcept
{
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// 3x3 matrix, row-major.
struct Mat3
{
    std::array<double, 9> m{};

    static constexpr Mat3 identity() noexcept
    {
        return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
    }

    constexpr double operator()(int row, int col) const noexcept { return m[3 * row + col]; }
    constexpr double& operator()(int row, int col) noexcept { return m[3 * row + col]; }

    constexpr Vec3 column(int col) const noexcept
    {
        return {m[col], m[3 + col], m[6 + col]};
    }

    constexpr Mat3 transposed() const noexcept
    {
        return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }

    constexpr double determinant() const noexcept
    {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
               + m[2] * (m[3] * m[7] - m[4] * m[6]);
    }
};

constexpr Vec3 operator*(const Mat3& a, const Vec3& v) noexcept
{
    return {a.m[0] * v.x + a.m[1] * v.y + a.m[2] * v.z,
            a.m[3] * v.x + a.m[4] * v.y + a.m[5] * v.z,
            a.m[6] * v.x + a.m[7] * v.y + a.m[8] * v.z};
}

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) noexcept
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    }
    return r;
}

}  // namespace rotwalk
