#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "llgwall/calculus.hpp"
#include "llgwall/field.hpp"
#include "llgwall/walls.hpp"

namespace llgwall {

// Leading spectral data of the discrete Poeschl-Teller operator
// L = d2 - 1 + 2 sech^2 x.
struct SpectralReport {
    std::vector<double> eigenvalues;   // top-k, descending
    std::vector<double> overlap_sech;  // |<phi_i, sech/||sech||>| per mode
    double lambda1 = 0.0;              // bound state, ~0
    double lambda2 = 0.0;              // edge of the discretized essential spectrum
    double e_decay_rate = 0.0;         // -lambda2 = slowest decay rate of A on E
};

// Dense symmetric eigensolve of the L matrix (interior three-point Laplacian
// plus the diagonal potential 1 - 2 th^2 x; the eigenmodes of interest vanish
// at the truncated boundary, so the symmetric closure is used).
inline SpectralReport spectral_report(const Grid& g, int k = 6) {
    const int n = g.n();
    if (n > 4097)
        throw std::invalid_argument("spectral_report: dense eigensolve limited to N <= 4097");
    if (k < 2 || k > n) throw std::invalid_argument("spectral_report: bad k");

    const double h = g.spacing();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    const double off = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
        const double t = th(g.node(i));
        L(i, i) = -2.0 * off + (1.0 - 2.0 * t * t);
        if (i > 0) L(i, i - 1) = off;
        if (i + 1 < n) L(i, i + 1) = off;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_report: eigensolve failed");

    ScalarField sech_n = ScalarField::sample(g, [](double x) { return sech(x); });
    const double sn = l2_norm(sech_n);
    for (int i = 0; i < n; ++i) sech_n[i] /= sn;

    SpectralReport rep;
    for (int j = 0; j < k; ++j) {
        const int col = n - 1 - j;  // SelfAdjointEigenSolver sorts ascending
        rep.eigenvalues.push_back(solver.eigenvalues()(col));
        ScalarField phi(g);
        for (int i = 0; i < n; ++i) phi[i] = solver.eigenvectors()(i, col);
        const double pn = l2_norm(phi);
        rep.overlap_sech.push_back(std::abs(inner_l2(phi, sech_n)) / pn);
    }
    rep.lambda1 = rep.eigenvalues[0];
    rep.lambda2 = rep.eigenvalues[1];
    rep.e_decay_rate = -rep.lambda2;
    return rep;
}

} // namespace llgwall
