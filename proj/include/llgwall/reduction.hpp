#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "llgwall/calculus.hpp"
#include "llgwall/dynamics.hpp"
#include "llgwall/field.hpp"
#include "llgwall/walls.hpp"

namespace llgwall {

// Mobile-frame coordinates r1 = <v, M1>, r2 = <v, M2> of a field close to
// the wall. Valid only on the hemisphere <v, M0> > 0.
inline PairField frame_coords(const SpinField& v, const MobileFrame& frame) {
    if (!(v.grid() == frame.grid))
        throw grid_mismatch("frame_coords: field and frame grids differ");
    PairField r(v.grid());
    for (int i = 0; i < v.size(); ++i) {
        if (!(dot(v[i], frame.m0[i]) > 0.0))
            throw out_of_chart("frame_coords: <v, M0> <= 0 at node " + std::to_string(i));
        r.r1()[i] = dot(v[i], frame.m1[i]);
        r.r2()[i] = v[i].y;
    }
    return r;
}

struct LiftedField {
    std::vector<Vec3> v, v_x, v_xx;
};

// Exact lift of (r, r_x, r_xx) through the decomposition
//   v = sqrt(1-|r|^2) M0 + r1 M1 + r2 M2,
// with v_x, v_xx obtained by the product/chain rule using the closed-form
// frame derivatives (no finite differences of v).
inline LiftedField frame_lift(const PairField& r, const PairField& r_x,
                              const PairField& r_xx, const MobileFrame& frame) {
    if (!(r.grid() == frame.grid) || !(r_x.grid() == frame.grid) || !(r_xx.grid() == frame.grid))
        throw grid_mismatch("frame_lift: grids differ");
    const Grid& g = frame.grid;
    const int n = g.n();
    LiftedField out;
    out.v.resize(n);
    out.v_x.resize(n);
    out.v_xx.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = g.node(i);
        const double s = sech(x), t = th(x);
        const double r1 = r.r1()[i], r2 = r.r2()[i];
        const double p1 = r_x.r1()[i], p2 = r_x.r2()[i];
        const double q1 = r_xx.r1()[i], q2 = r_xx.r2()[i];
        const double m = r1 * r1 + r2 * r2;
        if (m > 1.0 - 1e-10)
            throw out_of_chart("frame_lift: |r| too close to 1 at node " + std::to_string(i));
        const double rho = std::sqrt(1.0 - m);
        const double rp = r1 * p1 + r2 * p2;
        const double rho_x = -rp / rho;
        const double rho_xx =
            -(p1 * p1 + p2 * p2 + r1 * q1 + r2 * q2) / rho - rp * rp / (rho * rho * rho);

        const Vec3 m0 = frame.m0[i], m1 = frame.m1[i];
        out.v[i] = rho * m0 + r1 * m1 + r2 * frame_m2;

        const double a = rho_x - r1 * s;   // M0 coefficient of v_x
        const double b = rho * s + p1;     // M1 coefficient
        out.v_x[i] = a * m0 + b * m1 + p2 * frame_m2;

        const double a_x = rho_xx - p1 * s + r1 * s * t;
        const double b_x = rho_x * s - rho * s * t + q1;
        out.v_xx[i] = (a_x - b * s) * m0 + (a * s + b_x) * m1 + q2 * frame_m2;
    }
    return out;
}

// ell = d/dx + th(x)
inline ScalarField op_ell(const ScalarField& f) {
    ScalarField out = d1(f);
    for (int i = 0; i < f.size(); ++i) out[i] += th(f.grid().node(i)) * f[i];
    return out;
}

// L = d^2/dx^2 + (1 - 2 th^2 x)
inline ScalarField op_L(const ScalarField& f) {
    ScalarField out = d2(f);
    for (int i = 0; i < f.size(); ++i) {
        const double t = th(f.grid().node(i));
        out[i] += (1.0 - 2.0 * t * t) * f[i];
    }
    return out;
}

// A = J L with J = [[1,1],[-1,1]]: A r = (L r1 + L r2, -L r1 + L r2).
inline PairField op_A(const PairField& r) {
    const ScalarField L1 = op_L(r.r1());
    const ScalarField L2 = op_L(r.r2());
    PairField out(r.grid());
    for (int i = 0; i < r.size(); ++i) {
        out.r1()[i] = L1[i] + L2[i];
        out.r2()[i] = -L1[i] + L2[i];
    }
    return out;
}

// The six pieces of the reduced right-hand side A r + R_delta; their sum is
// the full RHS.
struct ReducedRHSParts {
    PairField linear_part;  // A r
    PairField ell_term;     // -delta diag(ell, ell) r
    PairField g_term;       // G(r) r_xx
    PairField h1_term;      // H1(x, r) r_x
    PairField h2_term;      // H2(r)(r_x, r_x)
    PairField p_term;       // P_delta(x, r)
};

// Full nonlinear reduced RHS of the moving-frame equation in r-coordinates.
// r_x and r_xx are always the discrete d1/d2 of the supplied r.
// Requires |r|^2 <= 1/2 pointwise and |delta| <= 1.
inline std::pair<PairField, ReducedRHSParts> reduced_rhs(const PairField& r, double delta) {
    if (std::abs(delta) > 1.0)
        throw out_of_regime("reduced_rhs: |delta| > 1");
    const Grid& g = r.grid();
    const int n = g.n();

    ReducedRHSParts parts{PairField(g), PairField(g), PairField(g),
                          PairField(g), PairField(g), PairField(g)};
    parts.linear_part = op_A(r);

    const ScalarField p1f = d1(r.r1());
    const ScalarField p2f = d1(r.r2());
    const ScalarField q1f = d2(r.r1());
    const ScalarField q2f = d2(r.r2());

    for (int i = 0; i < n; ++i) {
        const double x = g.node(i);
        const double s = sech(x), t = th(x);
        const double r1 = r.r1()[i], r2 = r.r2()[i];
        const double p1 = p1f[i], p2 = p2f[i];
        const double q1 = q1f[i], q2 = q2f[i];
        const double m = r1 * r1 + r2 * r2;
        if (m > 0.5)
            throw out_of_regime("reduced_rhs: |r|^2 > 1/2 at node " + std::to_string(i));
        const double rho = std::sqrt(1.0 - m);

        parts.ell_term.r1()[i] = -delta * (p1 + t * r1);
        parts.ell_term.r2()[i] = -delta * (p2 + t * r2);

        // G(r) r_xx
        const double g11 = r1 * r2 / rho;
        const double g12 = r2 * r2 / rho + rho - 1.0;
        const double g21 = -r1 * r1 / rho - rho + 1.0;
        parts.g_term.r1()[i] = g11 * q1 + g12 * q2;
        parts.g_term.r2()[i] = g21 * q1 - g11 * q2;

        // H1(x, r) r_x
        const double hf = 2.0 * s / rho;
        const double h11 = hf * (r2 * rho - r1 * r2 * r2);
        const double h12 = hf * (-r2 + r2 * r1 * r1);
        const double h21 = hf * (r2 - r2 * r2 * r2);
        const double h22 = hf * (rho * r2 + r1 * r2 * r2);
        parts.h1_term.r1()[i] = h11 * p1 + h12 * p2;
        parts.h1_term.r2()[i] = h21 * p1 + h22 * p2;

        // H2(r)(r_x, r_x)
        const double rp = r1 * p1 + r2 * p2;
        const double sf = ((1.0 - m) * (p1 * p1 + p2 * p2) + rp * rp) / ((1.0 - m) * rho);
        parts.h2_term.r1()[i] = sf * (rho * r1 + r2);
        parts.h2_term.r2()[i] = sf * (rho * r2 - r1);

        // P_delta(x, r); sh/ch^2 = t*s, 1/ch^2 = s^2
        parts.p_term.r1()[i] =
            2.0 * r2 * (rho - 1.0) * s * s - 2.0 * r1 * r2 * t * s - 2.0 * r1 * m * s * s
            - 2.0 * r1 * r1 * rho * t * s + r1 * r1 * r1 + r2 * (1.0 - rho) + r1 * r2 * r2
            - delta * (s * (rho - 1.0 + r1 * r1) + (rho - 1.0) * r1 * t);
        parts.p_term.r2()[i] =
            -2.0 * r1 * (rho - 1.0) * s * s + 2.0 * r1 * r1 * t * s - 2.0 * r2 * m * s * s
            - 2.0 * r1 * r2 * rho * t * s + r2 * m + r1 * (rho - 1.0)
            - delta * (s * r1 * r2 + (rho - 1.0) * r2 * t);
    }

    PairField total(g);
    for (int i = 0; i < n; ++i) {
        total.r1()[i] = parts.linear_part.r1()[i] + parts.ell_term.r1()[i] +
                        parts.g_term.r1()[i] + parts.h1_term.r1()[i] +
                        parts.h2_term.r1()[i] + parts.p_term.r1()[i];
        total.r2()[i] = parts.linear_part.r2()[i] + parts.ell_term.r2()[i] +
                        parts.g_term.r2()[i] + parts.h1_term.r2()[i] +
                        parts.h2_term.r2()[i] + parts.p_term.r2()[i];
    }
    return {std::move(total), std::move(parts)};
}

// Independent route for the equivalence oracle: evaluate the moving-frame
// RHS on an analytically lifted field and project back onto (M1, M2). The
// lift supplies v_x and v_xx, so no finite difference of v enters.
inline PairField project_rhs_moving(const LiftedField& lift, const MobileFrame& frame,
                                    double delta) {
    const Grid& g = frame.grid;
    PairField out(g);
    for (int i = 0; i < g.n(); ++i) {
        const Vec3& v = lift.v[i];
        const Vec3 h{lift.v_xx[i].x, lift.v_xx[i].y - v.y, lift.v_xx[i].z - v.z};
        const Vec3 c = cross(v, h);
        const Vec3 f = -c - cross(v, c) - delta * (lift.v_x[i] + v.x * v - e1);
        out.r1()[i] = dot(f, frame.m1[i]);
        out.r2()[i] = f.y;
    }
    return out;
}

} // namespace llgwall
