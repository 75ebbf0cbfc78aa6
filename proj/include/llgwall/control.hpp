#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "llgwall/calculus.hpp"
#include "llgwall/field.hpp"
#include "llgwall/walls.hpp"

namespace llgwall {

// Two-level open-loop plan:
//   delta(t) = delta2 - (sigma2-sigma1)/T on [0,T), delta2 afterwards,
// with T large enough that the first level is admissible.
struct ControlPlan {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double delta1 = 0.0;  // first level
    double delta2 = 0.0;
    double T = 0.0;       // switch time, a multiple of dt
    double delta0_bound = 0.0;
    ControlSchedule schedule = ControlSchedule::constant(0.0);
};

namespace detail {
inline double snap_up(double t, double dt) {
    return std::ceil(t / dt - 1e-9) * dt;
}
} // namespace detail

// Chooses the switch time (hint if admissible, otherwise twice the smallest
// admissible T), snaps it up to a step boundary and emits the schedule.
inline ControlPlan plan_control(double sigma1, double sigma2, double delta2,
                                double delta0_bound, double dt,
                                std::optional<double> T_hint = std::nullopt) {
    if (!(delta0_bound > 0.0))
        throw std::invalid_argument("plan_control: delta0_bound must be positive");
    if (std::abs(delta2) > delta0_bound)
        throw std::invalid_argument("plan_control: |delta2| exceeds delta0_bound");
    if (!(dt > 0.0)) throw std::invalid_argument("plan_control: dt must be positive");

    const double dsig = sigma2 - sigma1;
    auto admissible = [&](double T) {
        return T > 0.0 && std::abs(delta2 - dsig / T) <= delta0_bound * (1.0 + 1e-12);
    };

    double T = 0.0;
    if (T_hint && admissible(detail::snap_up(*T_hint, dt))) {
        T = detail::snap_up(*T_hint, dt);
    } else if (dsig == 0.0) {
        T = detail::snap_up(1.0, dt);
    } else {
        // |delta2 - dsig/T| <= bound with |delta2| <= bound is a lower bound
        // on T; the edge dsig/(delta2 +- bound) degenerates when delta2 sits
        // exactly on the admissibility boundary with dsig pushing outwards.
        const double edge = (dsig > 0.0) ? delta2 + delta0_bound : delta2 - delta0_bound;
        if (edge == 0.0)
            throw std::invalid_argument("plan_control: no admissible switch time");
        T = detail::snap_up(2.0 * dsig / edge, dt);
        if (!admissible(T))
            throw std::invalid_argument("plan_control: no admissible switch time");
    }

    ControlPlan plan;
    plan.sigma1 = sigma1;
    plan.sigma2 = sigma2;
    plan.delta2 = delta2;
    plan.delta0_bound = delta0_bound;
    plan.T = T;
    plan.delta1 = delta2 - dsig / T;
    plan.schedule = ControlSchedule({T}, {plan.delta1, delta2});
    return plan;
}

// Wall position and phase measured from the zero crossing of u1.
struct WallEstimate {
    double sigma_est = 0.0;
    double theta_est = 0.0;  // in (-pi, pi]
    bool valid = false;
};

// Locates the single - to + sign change of u1 by linear interpolation; the
// phase is atan2(-u2, u3) at the crossing.
inline WallEstimate track_wall(const SpinField& u) {
    const Grid& g = u.grid();
    int crossing = -1;
    int changes = 0;
    for (int i = 0; i + 1 < g.n(); ++i) {
        const double a = u[i].x, b = u[i + 1].x;
        if (a < 0.0 && b >= 0.0) {
            ++changes;
            crossing = i;
        } else if (a >= 0.0 && b < 0.0) {
            ++changes;
        }
    }
    if (changes == 0) throw no_wall("track_wall: u1 has no sign change");
    if (changes > 1) throw no_wall("track_wall: u1 has multiple sign changes");
    if (crossing < 0) throw no_wall("track_wall: u1 changes sign + to - only");

    const int i = crossing;
    const double f0 = u[i].x, f1 = u[i + 1].x;
    const double alpha = -f0 / (f1 - f0);
    const double u2 = u[i].y + alpha * (u[i + 1].y - u[i].y);
    const double u3 = u[i].z + alpha * (u[i + 1].z - u[i].z);
    WallEstimate est;
    est.sigma_est = g.node(i) + alpha * g.spacing();
    est.theta_est = std::atan2(-u2, u3);
    est.valid = true;
    return est;
}

// Nearest-branch continuation: shift angle by multiples of 2 pi to land
// within pi of the reference.
inline double unwrap_near(double angle, double reference) {
    const double two_pi = 2.0 * std::numbers::pi;
    return angle + two_pi * std::round((reference - angle) / two_pi);
}

// Minimizes theta -> h2_dist(u, u^{delta,theta,sigma_target}(t, .)) by
// golden-section search seeded at the tracker's phase estimate. sigma_target
// is fixed, never fitted.
inline std::pair<double, double> best_matching_profile(const SpinField& u, double delta,
                                                       double t, double sigma_target) {
    const Grid& g = u.grid();
    const WallEstimate est = track_wall(u);
    const double seed = est.theta_est - delta * t;

    auto dist = [&](double theta) {
        return h2_dist(u, wall_profile({delta, theta, sigma_target}, t, g));
    };

    // the objective is smooth and 2pi-periodic with a single minimum near
    // the seed; a +-1 bracket is ample
    double a = seed - 1.0, b = seed + 1.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = dist(c), fd = dist(d);
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = dist(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = dist(d);
        }
    }
    const double theta = 0.5 * (a + b);
    double best = dist(theta);
    // report theta on the principal branch
    double theta_wrapped = unwrap_near(theta, 0.0);
    return {theta_wrapped, best};
}

} // namespace llgwall
