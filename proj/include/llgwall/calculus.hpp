#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "llgwall/errors.hpp"
#include "llgwall/field.hpp"

namespace llgwall {

namespace detail {

// Second-order first derivative: central stencil inside, one-sided
// three-point stencils at the two boundary nodes.
inline void d1_raw(std::span<const double> f, std::span<double> out, double h) {
    const int n = static_cast<int>(f.size());
    const double inv2h = 1.0 / (2.0 * h);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
}

// Three-point Laplacian inside, one-sided four-point stencils at the ends.
inline void d2_raw(std::span<const double> f, std::span<double> out, double h) {
    const int n = static_cast<int>(f.size());
    const double invh2 = 1.0 / (h * h);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * invh2;
    for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * invh2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * invh2;
}

} // namespace detail

inline ScalarField d1(const ScalarField& f) {
    ScalarField out(f.grid());
    detail::d1_raw(f.values(), out.values(), f.grid().spacing());
    return out;
}

inline ScalarField d2(const ScalarField& f) {
    ScalarField out(f.grid());
    detail::d2_raw(f.values(), out.values(), f.grid().spacing());
    return out;
}

// Componentwise derivatives of a Vec3 field.
inline void d1_vec(std::span<const Vec3> f, std::span<Vec3> out, double h) {
    const int n = static_cast<int>(f.size());
    const double inv2h = 1.0 / (2.0 * h);
    out[0] = inv2h * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
    for (int i = 1; i < n - 1; ++i) out[i] = inv2h * (f[i + 1] - f[i - 1]);
    out[n - 1] = inv2h * (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]);
}

inline void d2_vec(std::span<const Vec3> f, std::span<Vec3> out, double h) {
    const int n = static_cast<int>(f.size());
    const double invh2 = 1.0 / (h * h);
    out[0] = invh2 * (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]);
    for (int i = 1; i < n - 1; ++i) out[i] = invh2 * (f[i + 1] - 2.0 * f[i] + f[i - 1]);
    out[n - 1] = invh2 * (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]);
}

// Trapezoid quadrature of f*g over [-X, X].
inline double inner_l2(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid()))
        throw grid_mismatch("inner_l2: fields on different grids");
    const int n = f.size();
    const double h = f.grid().spacing();
    double acc = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    for (int i = 1; i < n - 1; ++i) acc += f[i] * g[i];
    return acc * h;
}

inline double l2_norm(const ScalarField& f) { return std::sqrt(inner_l2(f, f)); }

// Componentwise-summed L^2 pairing of coordinate pairs.
inline double inner_l2(const PairField& f, const PairField& g) {
    return inner_l2(f.r1(), g.r1()) + inner_l2(f.r2(), g.r2());
}

// ||f||^2 + ||d1 f||^2 + ||d2 f||^2 with trapezoid quadrature.
inline double h2_norm_sq(const ScalarField& f) {
    const ScalarField fx = d1(f);
    const ScalarField fxx = d2(f);
    return inner_l2(f, f) + inner_l2(fx, fx) + inner_l2(fxx, fxx);
}

inline double h2_norm(const PairField& r) {
    return std::sqrt(h2_norm_sq(r.r1()) + h2_norm_sq(r.r2()));
}

// Discrete H^2 distance between two magnetization fields, summed over the
// three Cartesian components of the difference.
inline double h2_dist(const SpinField& u, const SpinField& w) {
    if (!(u.grid() == w.grid()))
        throw grid_mismatch("h2_dist: fields on different grids");
    const Grid& g = u.grid();
    ScalarField diff(g);
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < g.n(); ++i) {
            const Vec3 d = u[i] - w[i];
            diff[i] = (c == 0) ? d.x : (c == 1) ? d.y : d.z;
        }
        acc += h2_norm_sq(diff);
    }
    return std::sqrt(acc);
}

// Exchange + anisotropy energy E(u) = 1/2 int(|u_x|^2 + u2^2 + u3^2),
// nonincreasing along the uncontrolled flow.
inline double energy(const SpinField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    std::vector<Vec3> ux(n);
    d1_vec(u.values(), ux, g.spacing());
    ScalarField dens(g);
    for (int i = 0; i < n; ++i)
        dens[i] = dot(ux[i], ux[i]) + u[i].y * u[i].y + u[i].z * u[i].z;
    ScalarField one = ScalarField::sample(g, [](double) { return 1.0; });
    return 0.5 * inner_l2(dens, one);
}

} // namespace llgwall
