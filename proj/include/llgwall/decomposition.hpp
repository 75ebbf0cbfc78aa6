#pragma once

#include <array>
#include <cmath>
#include <iostream>
#include <string>
#include <utility>

#include "llgwall/calculus.hpp"
#include "llgwall/field.hpp"
#include "llgwall/reduction.hpp"
#include "llgwall/walls.hpp"

namespace llgwall {

// Symmetry coordinates Lambda = (theta, sigma): phase about e1 and position
// along the wire.
struct Lambda {
    double theta = 0.0;
    double sigma = 0.0;
};

// Kernel basis of A: a1 = (0, sech x), a2 = (sech x, 0), unnormalized as in
// the continuum (||a_i||^2 = 2 up to quadrature error).
inline std::pair<PairField, PairField> kernel_basis(const Grid& g) {
    PairField a1(g), a2(g);
    for (int i = 0; i < g.n(); ++i) {
        const double s = sech(g.node(i));
        a1.r2()[i] = s;
        a2.r1()[i] = s;
    }
    return {std::move(a1), std::move(a2)};
}

// (<r, a1>, <r, a2>) under the componentwise-summed trapezoid pairing.
inline std::array<double, 2> kernel_overlaps(const PairField& r) {
    const Grid& g = r.grid();
    const ScalarField s = ScalarField::sample(g, [](double x) { return sech(x); });
    return {inner_l2(r.r2(), s), inner_l2(r.r1(), s)};
}

// Coordinates of the symmetry-translated wall M_Lambda = R_theta M0(.-sigma)
// in the mobile frame. Defined while M_Lambda stays on the chart hemisphere.
inline PairField r_of_lambda(const Lambda& lam, const Grid& g) {
    PairField out(g);
    const double c = std::cos(lam.theta), sn = std::sin(lam.theta);
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.node(i);
        const double ts = th(x - lam.sigma), ss = sech(x - lam.sigma);
        if (!(ts * th(x) + c * ss * sech(x) > 0.0))
            throw out_of_chart("r_of_lambda: M_Lambda leaves the chart at node " +
                               std::to_string(i));
        out.r1()[i] = ts * sech(x) - c * ss * th(x);
        out.r2()[i] = -sn * ss;
    }
    return out;
}

// h(Lambda) = (<R_Lambda, a1>, <R_Lambda, a2>); dh(0) = -2 Id.
inline std::array<double, 2> h_of_lambda(const Lambda& lam, const Grid& g) {
    return kernel_overlaps(r_of_lambda(lam, g));
}

// Result of splitting r = R_Lambda + W with W orthogonal to the kernel.
struct Decomposition {
    Lambda lambda;
    PairField w;
    int newton_iters = 0;
    double residual = 0.0;
};

// Inverts the local diffeomorphism Psi: solves h(Lambda) = (<r,a1>, <r,a2>)
// by Newton with a finite-difference Jacobian, then W = r - R_Lambda.
inline Decomposition extract_coordinates(const PairField& r, double newton_tol = 1e-12,
                                         int max_iter = 50, double chart_radius = 0.5) {
    const Grid& g = r.grid();
    if (r.sup_norm() > chart_radius)
        throw out_of_chart("extract_coordinates: sup-norm beyond the chart radius");

    const std::array<double, 2> target = kernel_overlaps(r);
    Lambda lam{0.0, 0.0};
    const double fd = 1e-6;
    int used = 0;
    double res = 0.0;
    for (int it = 0;; ++it) {
        const std::array<double, 2> f = h_of_lambda(lam, g);
        const std::array<double, 2> err = {f[0] - target[0], f[1] - target[1]};
        res = std::max(std::abs(err[0]), std::abs(err[1]));
        used = it;
        if (res <= newton_tol) break;
        if (it >= max_iter)
            throw out_of_chart("extract_coordinates: Newton did not converge (outside the chart)");
        const auto fpt = h_of_lambda({lam.theta + fd, lam.sigma}, g);
        const auto fmt = h_of_lambda({lam.theta - fd, lam.sigma}, g);
        const auto fps = h_of_lambda({lam.theta, lam.sigma + fd}, g);
        const auto fms = h_of_lambda({lam.theta, lam.sigma - fd}, g);
        const double j00 = (fpt[0] - fmt[0]) / (2 * fd), j01 = (fps[0] - fms[0]) / (2 * fd);
        const double j10 = (fpt[1] - fmt[1]) / (2 * fd), j11 = (fps[1] - fms[1]) / (2 * fd);
        const double det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-14)
            throw out_of_chart("extract_coordinates: singular Jacobian");
        lam.theta -= (j11 * err[0] - j01 * err[1]) / det;
        lam.sigma -= (-j10 * err[0] + j00 * err[1]) / det;
    }

    const PairField rl = r_of_lambda(lam, g);
    PairField w(g);
    for (int i = 0; i < g.n(); ++i) {
        w.r1()[i] = r.r1()[i] - rl.r1()[i];
        w.r2()[i] = r.r2()[i] - rl.r2()[i];
    }
    return {lam, std::move(w), used, res};
}

// Lyapunov functional V(W) = 1/2 ||L W1||^2 + 1/2 ||L W2||^2; equivalent to
// the squared H^2 norm on the kernel-orthogonal subspace.
inline double lyapunov_v(const PairField& w) {
    const auto ov = kernel_overlaps(w);
    if (std::abs(ov[0]) > 1e-6 || std::abs(ov[1]) > 1e-6)
        std::cerr << "lyapunov_v: warning: W has kernel overlap (" << ov[0] << ", "
                  << ov[1] << ")\n";
    const ScalarField l1 = op_L(w.r1());
    const ScalarField l2 = op_L(w.r2());
    return 0.5 * (inner_l2(l1, l1) + inner_l2(l2, l2));
}

} // namespace llgwall
