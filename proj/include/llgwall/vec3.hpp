#pragma once

#include <cmath>

#include "llgwall/errors.hpp"

namespace llgwall {

// Point of S^2 or a tangent/field value in R^3, components in the canonical
// basis (e1, e2, e3) with e1 the wire axis.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double s, Vec3 v) { return v *= s; }
constexpr Vec3 operator*(Vec3 v, double s) { return v *= s; }
constexpr Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline constexpr Vec3 e1{1.0, 0.0, 0.0};
inline constexpr Vec3 e2{0.0, 1.0, 0.0};
inline constexpr Vec3 e3{0.0, 0.0, 1.0};

// Rotation R_theta about the wire axis e1: fixes v1, rotates (v2, v3).
inline Vec3 rotate_e1(double theta, const Vec3& v) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {v.x, c * v.y - s * v.z, s * v.y + c * v.z};
}

// Radial projection onto the unit sphere.
inline Vec3 sphere_project(const Vec3& v) {
    const double n = norm(v);
    if (n <= 1e-14)
        throw degenerate_vector("sphere_project: vector norm below 1e-14");
    return (1.0 / n) * v;
}

} // namespace llgwall
