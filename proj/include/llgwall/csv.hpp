#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <string>

#include "llgwall/dynamics.hpp"
#include "llgwall/field.hpp"

namespace llgwall {

// Full double precision, deterministic across reruns.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_spin_snapshot(const std::string& path, const SpinField& u) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "x,u1,u2,u3\n";
    for (int i = 0; i < u.size(); ++i)
        out << fmt17(u.grid().node(i)) << ',' << fmt17(u[i].x) << ',' << fmt17(u[i].y)
            << ',' << fmt17(u[i].z) << '\n';
}

inline void write_scalar_snapshot(const std::string& path, const ScalarField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "x,f\n";
    for (int i = 0; i < f.size(); ++i)
        out << fmt17(f.grid().node(i)) << ',' << fmt17(f[i]) << '\n';
}

inline std::string snapshot_filename(double t) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "snap_%.6f.csv", t);
    return buf;
}

inline void write_diagnostics(const std::string& path, std::span<const DiagRow> rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "t,delta,norm_drift,sigma_est,theta_est,w_h2,lyapunov\n";
    for (const DiagRow& r : rows)
        out << fmt17(r.t) << ',' << fmt17(r.delta) << ',' << fmt17(r.norm_drift) << ','
            << fmt17(r.extras.sigma_est) << ',' << fmt17(r.extras.theta_est) << ','
            << fmt17(r.extras.w_h2) << ',' << fmt17(r.extras.lyapunov) << '\n';
}

struct CriterionResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

inline void write_report(const std::string& path, std::span<const CriterionResult> rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "criterion,measured,threshold,pass\n";
    for (const CriterionResult& r : rows)
        out << r.name << ',' << fmt17(r.measured) << ',' << fmt17(r.threshold) << ','
            << (r.pass ? "true" : "false") << '\n';
}

} // namespace llgwall
