#pragma once

#include <cmath>
#include <vector>

#include "llgwall/field.hpp"
#include "llgwall/grid.hpp"
#include "llgwall/vec3.hpp"

namespace llgwall {

// Hyperbolics clamped for |x| > 30 where th saturates and sech underflows
// below double rounding of the wall formulas.
inline double th(double x) {
    if (x > 30.0) return 1.0;
    if (x < -30.0) return -1.0;
    return std::tanh(x);
}

inline double sech(double x) {
    if (std::abs(x) > 30.0) return 0.0;
    return 1.0 / std::cosh(x);
}

// The wall M0(x) = (th x, 0, sech x), stationary solution separating
// magnetization +e1 from -e1.
inline Vec3 wall_m0(double x) { return {th(x), 0.0, sech(x)}; }

// M1(x) = (sech x, 0, -th x); completes the mobile frame with M2 = e2.
inline Vec3 frame_m1(double x) { return {sech(x), 0.0, -th(x)}; }

inline constexpr Vec3 frame_m2 = e2;

// Closed-form frame derivatives: M0' = sech*M1, M1' = -sech*M0.
inline Vec3 wall_m0_x(double x) { return sech(x) * frame_m1(x); }
inline Vec3 wall_m0_xx(double x) {
    const double s = sech(x), t = th(x);
    return (-s * t) * frame_m1(x) + (-s * s) * wall_m0(x);
}
inline Vec3 frame_m1_x(double x) { return -sech(x) * wall_m0(x); }
inline Vec3 frame_m1_xx(double x) {
    const double s = sech(x), t = th(x);
    return (s * t) * wall_m0(x) + (-s * s) * frame_m1(x);
}

// The orthonormal triple (M0(x_i), M1(x_i), M2) sampled on a grid.
struct MobileFrame {
    Grid grid;
    std::vector<Vec3> m0;
    std::vector<Vec3> m1;

    explicit MobileFrame(const Grid& g) : grid(g), m0(g.n()), m1(g.n()) {
        for (int i = 0; i < g.n(); ++i) {
            m0[i] = wall_m0(g.node(i));
            m1[i] = frame_m1(g.node(i));
        }
    }
};

// Travelling wall profile u^{delta,theta,sigma}(t,x)
//   = R_{delta t + theta} M0(x + delta t - sigma).
inline SpinField wall_profile(const WallParams& p, double t, const Grid& g) {
    const double angle = p.delta * t + p.theta;
    const double shift = p.delta * t - p.sigma;
    return SpinField::sample(g, [&](double x) {
        return rotate_e1(angle, wall_m0(x + shift));
    });
}

} // namespace llgwall
