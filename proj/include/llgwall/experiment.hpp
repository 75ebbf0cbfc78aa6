#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "llgwall/calculus.hpp"
#include "llgwall/config.hpp"
#include "llgwall/control.hpp"
#include "llgwall/csv.hpp"
#include "llgwall/decay.hpp"
#include "llgwall/decomposition.hpp"
#include "llgwall/dynamics.hpp"
#include "llgwall/walls.hpp"

namespace llgwall {

// A sub-operation failed; carries the pipeline stage for the report.
struct experiment_error : std::runtime_error {
    std::string stage;
    experiment_error(std::string stage_, const std::string& what_)
        : std::runtime_error("stage '" + stage_ + "': " + what_), stage(std::move(stage_)) {}
};

// Deterministic generator (splitmix64) so experiment outputs are
// bit-reproducible across platforms; std distributions are not.
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double normal() {
        // Box-Muller; uniform01 may return 0, shift it away from the log pole
        const double u1 = uniform01() + 0x1.0p-54;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t state_;
};

// Smooth random combination of Gaussian bumps, projected onto the discrete
// kernel-orthogonal subspace of the wall at sigma1 (both components), in the
// coordinates of the sigma1-shifted frame.
inline PairField make_e_perturbation(const Grid& g, double sigma1, std::uint64_t seed,
                                     int n_modes = 6) {
    DetRng rng(seed);
    PairField w(g);
    for (int comp = 0; comp < 2; ++comp) {
        ScalarField& f = comp == 0 ? w.r1() : w.r2();
        for (int j = 0; j < n_modes; ++j) {
            const double c = sigma1 + rng.uniform(-3.0, 3.0);
            const double width = rng.uniform(1.5, 3.0);
            const double a = rng.normal();
            for (int i = 0; i < g.n(); ++i) {
                const double z = (g.node(i) - c) / width;
                f[i] += a * std::exp(-z * z);
            }
        }
    }
    // project out the shifted kernel modes (0, sech(.-sigma1)), (sech(.-sigma1), 0)
    const ScalarField ker = ScalarField::sample(g, [&](double x) { return sech(x - sigma1); });
    const double ker_sq = inner_l2(ker, ker);
    for (ScalarField* f : {&w.r1(), &w.r2()}) {
        const double ov = inner_l2(*f, ker) / ker_sq;
        for (int i = 0; i < g.n(); ++i) (*f)[i] -= ov * ker[i];
    }
    return w;
}

// Lift a perturbation given in the (theta1, sigma1)-translated frame onto the
// sphere around the corresponding wall profile.
inline SpinField lift_perturbation(const PairField& w, double theta1, double sigma1) {
    const Grid& g = w.grid();
    SpinField out(g);
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.node(i);
        const double w1 = w.r1()[i], w2 = w.r2()[i];
        const double rho = std::sqrt(1.0 - w1 * w1 - w2 * w2);
        const Vec3 v = rho * wall_m0(x - sigma1) + w1 * frame_m1(x - sigma1) + w2 * frame_m2;
        out[i] = rotate_e1(theta1, v);
    }
    return out;
}

// Initial condition: wall profile at (theta1, sigma1) plus a kernel-orthogonal
// perturbation of the requested H^2 size (exact wall when amplitude is 0).
inline SpinField make_initial_condition(const Grid& g, double theta1, double sigma1,
                                        double amplitude, std::uint64_t seed) {
    const SpinField wall = wall_profile({0.0, theta1, sigma1}, 0.0, g);
    if (amplitude == 0.0) return wall;
    PairField w = make_e_perturbation(g, sigma1, seed);
    SpinField u = lift_perturbation(w, theta1, sigma1);
    // h2 size is nearly linear in the amplitude; a few rescales pin it down
    for (int pass = 0; pass < 3; ++pass) {
        const double d = h2_dist(u, wall);
        const double scale = amplitude / d;
        for (int i = 0; i < g.n(); ++i) {
            w.r1()[i] *= scale;
            w.r2()[i] *= scale;
        }
        u = lift_perturbation(w, theta1, sigma1);
    }
    return u;
}

// Rotate by -theta_ref and translate by a grid-aligned -shift_nodes*h; the
// vacated tail is filled with the asymptotic values +-e1 (exact under
// rotations about e1).
inline SpinField recenter(const SpinField& u, double theta_ref, long shift_nodes) {
    const Grid& g = u.grid();
    const int n = g.n();
    SpinField out(g);
    for (int i = 0; i < n; ++i) {
        const long j = i + shift_nodes;
        if (j < 0)
            out[i] = -e1;
        else if (j >= n)
            out[i] = e1;
        else
            out[i] = rotate_e1(-theta_ref, u[static_cast<int>(j)]);
    }
    return out;
}

struct ExperimentConfig {
    int n = 1025;
    double half_width = 20.0;
    double dt_cfl = 0.25;
    double sigma1 = 0.0, sigma2 = 5.0;
    double delta1 = 0.02, delta2 = 0.03;
    double theta1 = 0.0;
    double epsilon = 0.05;
    double epsilon0 = 0.05;
    double delta0 = 0.1;
    double perturbation = 1e-3;
    double post_horizon = 100.0;
    double output_dt = 0.25;
    double t_hint = 0.0;  // 0 = derive T from the admissibility bound
    std::uint64_t seed = 42;

    static const std::vector<std::string>& known_keys() {
        static const std::vector<std::string> keys = {
            "grid.n",         "grid.half_width", "sim.dt_cfl",     "sim.post_horizon",
            "sim.output_dt",  "ctrl.sigma1",     "ctrl.sigma2",    "ctrl.delta1",
            "ctrl.delta2",    "ctrl.theta1",     "ctrl.epsilon",   "ctrl.epsilon0",
            "ctrl.delta0",    "ctrl.perturbation", "ctrl.t_hint",  "seed",
        };
        return keys;
    }

    static ExperimentConfig from_config(const Config& cfg) {
        cfg.require_known(known_keys());
        ExperimentConfig e;
        e.n = static_cast<int>(cfg.get_long("grid.n", e.n));
        e.half_width = cfg.get_double("grid.half_width", e.half_width);
        e.dt_cfl = cfg.get_double("sim.dt_cfl", e.dt_cfl);
        e.post_horizon = cfg.get_double("sim.post_horizon", e.post_horizon);
        e.output_dt = cfg.get_double("sim.output_dt", e.output_dt);
        e.sigma1 = cfg.get_double("ctrl.sigma1", e.sigma1);
        e.sigma2 = cfg.get_double("ctrl.sigma2", e.sigma2);
        e.delta1 = cfg.get_double("ctrl.delta1", e.delta1);
        e.delta2 = cfg.get_double("ctrl.delta2", e.delta2);
        e.theta1 = cfg.get_double("ctrl.theta1", e.theta1);
        e.epsilon = cfg.get_double("ctrl.epsilon", e.epsilon);
        e.epsilon0 = cfg.get_double("ctrl.epsilon0", e.epsilon0);
        e.delta0 = cfg.get_double("ctrl.delta0", e.delta0);
        e.perturbation = cfg.get_double("ctrl.perturbation", e.perturbation);
        e.t_hint = cfg.get_double("ctrl.t_hint", e.t_hint);
        e.seed = static_cast<std::uint64_t>(cfg.get_long("seed", static_cast<long>(e.seed)));
        return e;
    }
};

struct ExperimentReport {
    ControlPlan plan;
    double dist_initial = 0.0;
    double dist_at_T = 0.0;
    double theta2 = 0.0;              // best-matching phase at the switch time
    double theta2_prime = 0.0;        // post-switch limit phase
    double sigma2_prime = 0.0;        // post-switch limit position label
    double w_decay_rate = 0.0;
    double w_decay_r2 = 0.0;
    double lambda_tail_increment = 0.0;  // Cauchy check on Lambda(t)
    std::vector<DiagRow> diagnostics;    // lab segment then relaxation segment
    // relaxation-segment series, time measured from the switch
    std::vector<std::pair<double, double>> w_dist_series;      // ||W(s)-W_end||_H2
    std::vector<std::pair<double, double>> dist_to_limit;      // h2 dist to limit wall
    std::vector<std::pair<double, Lambda>> lambda_series;
    std::vector<CriterionResult> criteria;
    double runtime_seconds = 0.0;

    bool all_pass() const {
        for (const auto& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

// The full Theorem-1 pipeline: perturbed wall at (sigma1), two-level control,
// distance check at the switch time against the best-phase target profile,
// then decomposition of the relaxation segment in the delta2 moving frame
// with a decay fit for W and the Lambda limit.
inline ExperimentReport run_theorem1(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();

    if (std::abs(cfg.delta1) > cfg.delta0 || std::abs(cfg.delta2) > cfg.delta0)
        throw experiment_error("preconditions", "|delta_i| must be <= delta0 = " +
                                                    std::to_string(cfg.delta0));
    if (cfg.epsilon > cfg.epsilon0 || !(cfg.epsilon > 0.0))
        throw experiment_error("preconditions", "epsilon must lie in (0, epsilon0]");
    if (!(cfg.perturbation <= cfg.epsilon))
        throw experiment_error("preconditions", "perturbation exceeds epsilon");

    const Grid grid(cfg.half_width, cfg.n);
    const double h = grid.spacing();
    const double dt = cfg.dt_cfl * h * h;
    const int stride = std::max(1, static_cast<int>(std::llround(cfg.output_dt / dt)));

    ExperimentReport rep;

    try {
        rep.plan = plan_control(cfg.sigma1, cfg.sigma2, cfg.delta2, cfg.delta0, dt,
                                cfg.t_hint > 0.0 ? std::optional<double>(cfg.t_hint)
                                                 : std::nullopt);
    } catch (const std::exception& e) {
        throw experiment_error("plan-control", e.what());
    }

    SpinField u0 = make_initial_condition(grid, cfg.theta1, cfg.sigma1,
                                          cfg.perturbation, cfg.seed);
    rep.dist_initial = h2_dist(u0, wall_profile({cfg.delta1, cfg.theta1, cfg.sigma1}, 0.0, grid));

    // [0, T]: lab frame under the two-level schedule
    Trajectory lab;
    try {
        SimConfig sim(grid, dt, rep.plan.T, cfg.dt_cfl, 1, stride);
        lab = simulate(u0, rep.plan.schedule, sim, Frame::lab,
                       [&](double, const SpinField& u) {
                           DiagExtras ex;
                           try {
                               const WallEstimate est = track_wall(u);
                               ex.sigma_est = est.sigma_est;
                               ex.theta_est = est.theta_est;
                           } catch (const no_wall&) {}
                           return ex;
                       },
                       /*keep_snapshots=*/false);
    } catch (const std::exception& e) {
        throw experiment_error("lab-segment", e.what());
    }
    rep.diagnostics = lab.diagnostics;
    const SpinField& u_T = lab.final_state();

    try {
        auto [theta2, dist] = best_matching_profile(u_T, cfg.delta2, rep.plan.T, cfg.sigma2);
        rep.theta2 = theta2;
        rep.dist_at_T = dist;
    } catch (const std::exception& e) {
        throw experiment_error("match-at-T", e.what());
    }

    // recenter into the delta2 moving frame anchored at T
    const double theta_ref = cfg.delta2 * rep.plan.T + rep.theta2;
    const double sigma_star = cfg.sigma2 - cfg.delta2 * rep.plan.T;
    const long shift = std::llround(sigma_star / h);
    const double sigma_snap = shift * h;
    SpinField w0 = recenter(u_T, theta_ref, shift);

    // [T, T + post]: moving frame, decomposed sample by sample
    const MobileFrame frame(grid);
    std::vector<PairField> w_fields;
    std::vector<double> w_times;
    Trajectory relax;
    try {
        const double post = detail::snap_up(cfg.post_horizon, dt);
        SimConfig sim(grid, dt, post, cfg.dt_cfl, 1, stride);
        relax = simulate(w0, ControlSchedule::constant(cfg.delta2), sim, Frame::moving,
                         [&](double s, const SpinField& v) {
                             DiagExtras ex;
                             const Decomposition dec = extract_coordinates(frame_coords(v, frame));
                             ex.w_h2 = h2_norm(dec.w);
                             ex.lyapunov = lyapunov_v(dec.w);
                             try {
                                 const WallEstimate est = track_wall(v);
                                 ex.sigma_est = est.sigma_est;
                                 ex.theta_est = est.theta_est;
                             } catch (const no_wall&) {}
                             rep.lambda_series.emplace_back(s, dec.lambda);
                             w_fields.push_back(dec.w);
                             w_times.push_back(s);
                             return ex;
                         },
                         /*keep_snapshots=*/false);
    } catch (const std::exception& e) {
        throw experiment_error("relaxation-segment", e.what());
    }
    for (DiagRow row : relax.diagnostics) {
        row.t += rep.plan.T;
        rep.diagnostics.push_back(row);
    }

    // Lambda limit mapped back to the lab labels
    const Lambda lam_inf = rep.lambda_series.back().second;
    rep.theta2_prime = rep.theta2 + lam_inf.theta;
    rep.sigma2_prime = sigma_snap + lam_inf.sigma + cfg.delta2 * rep.plan.T;

    double tail_inc = 0.0;
    for (std::size_t i = rep.lambda_series.size() / 2; i + 1 < rep.lambda_series.size(); ++i) {
        const Lambda a = rep.lambda_series[i].second;
        const Lambda b = rep.lambda_series[i + 1].second;
        tail_inc = std::max(tail_inc, std::hypot(b.theta - a.theta, b.sigma - a.sigma));
    }
    rep.lambda_tail_increment = tail_inc;

    // W decay measured against the settled field (the discrete flow settles
    // at an O(h^2) offset from the sampled wall, which would mask the decay)
    try {
        const PairField& w_ref = w_fields.back();
        PairField diff(grid);
        for (std::size_t k = 0; k < w_fields.size(); ++k) {
            for (int i = 0; i < grid.n(); ++i) {
                diff.r1()[i] = w_fields[k].r1()[i] - w_ref.r1()[i];
                diff.r2()[i] = w_fields[k].r2()[i] - w_ref.r2()[i];
            }
            rep.w_dist_series.emplace_back(w_times[k], h2_norm(diff));
        }
        std::vector<std::pair<double, double>> fit_pts;
        for (const auto& [s, v] : rep.w_dist_series)
            if (s >= 0.25 && s <= 6.0 && v > 1e-13) fit_pts.emplace_back(s, v);
        const DecayFit fit = decay_fit(fit_pts);
        rep.w_decay_rate = fit.rate;
        rep.w_decay_r2 = fit.r_squared;
    } catch (const std::exception& e) {
        throw experiment_error("w-decay-fit", e.what());
    }

    // distance to the limit wall along the relaxation segment
    const SpinField limit_wall = wall_profile({0.0, lam_inf.theta, lam_inf.sigma}, 0.0, grid);
    {
        // reuse the stored W decomposition: rebuild v from (Lambda, W) samples
        // would re-do work; instead re-run the cheap distance on the recorded
        // coordinates via the lift of r = R_Lambda + W
        for (std::size_t k = 0; k < w_fields.size(); ++k) {
            const PairField r_l = r_of_lambda(rep.lambda_series[k].second, grid);
            PairField r_full(grid);
            for (int i = 0; i < grid.n(); ++i) {
                r_full.r1()[i] = r_l.r1()[i] + w_fields[k].r1()[i];
                r_full.r2()[i] = r_l.r2()[i] + w_fields[k].r2()[i];
            }
            SpinField v(grid);
            for (int i = 0; i < grid.n(); ++i) {
                const double r1 = r_full.r1()[i], r2 = r_full.r2()[i];
                const double rho = std::sqrt(std::max(0.0, 1.0 - r1 * r1 - r2 * r2));
                v[i] = rho * frame.m0[i] + r1 * frame.m1[i] + r2 * frame_m2;
            }
            rep.dist_to_limit.emplace_back(w_times[k], h2_dist(v, limit_wall));
        }
    }

    rep.criteria.push_back({"distance_at_T", rep.dist_at_T, cfg.epsilon,
                            rep.dist_at_T <= cfg.epsilon});
    const double lam_err = std::abs(rep.theta2_prime - rep.theta2) +
                           std::abs(rep.sigma2_prime - cfg.sigma2);
    rep.criteria.push_back({"lambda_limit", lam_err, cfg.epsilon, lam_err <= cfg.epsilon});
    rep.criteria.push_back({"w_decay_rate_positive", rep.w_decay_rate, 0.0,
                            rep.w_decay_rate > 0.0});

    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

inline void write_experiment_outputs(const ExperimentReport& rep, const std::string& dir) {
    write_diagnostics(dir + "/diagnostics.csv", rep.diagnostics);
    write_report(dir + "/report.csv", rep.criteria);
}

} // namespace llgwall
