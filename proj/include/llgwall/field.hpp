#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "llgwall/errors.hpp"
#include "llgwall/grid.hpp"
#include "llgwall/vec3.hpp"

namespace llgwall {

inline constexpr double unit_norm_tol = 1e-9;

// Real-valued samples on a Grid.
class ScalarField {
  public:
    explicit ScalarField(const Grid& g) : grid_(g), values_(g.n(), 0.0) {}

    ScalarField(const Grid& g, std::vector<double> values)
        : grid_(g), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_.n())
            throw grid_mismatch("ScalarField: value count does not match grid");
    }

    template <class F>
    static ScalarField sample(const Grid& g, F&& f) {
        ScalarField out(g);
        for (int i = 0; i < g.n(); ++i) out.values_[i] = f(g.node(i));
        return out;
    }

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.n(); }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

  private:
    Grid grid_;
    std::vector<double> values_;
};

// Sphere-valued magnetization samples u(x_i).
class SpinField {
  public:
    explicit SpinField(const Grid& g) : grid_(g), values_(g.n(), e1) {}

    SpinField(const Grid& g, std::vector<Vec3> values)
        : grid_(g), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_.n())
            throw grid_mismatch("SpinField: value count does not match grid");
    }

    template <class F>
    static SpinField sample(const Grid& g, F&& f) {
        SpinField out(g);
        for (int i = 0; i < g.n(); ++i) out.values_[i] = f(g.node(i));
        return out;
    }

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.n(); }
    const Vec3& operator[](int i) const { return values_[i]; }
    Vec3& operator[](int i) { return values_[i]; }
    const std::vector<Vec3>& values() const { return values_; }
    std::vector<Vec3>& values() { return values_; }

    // Largest deviation of a sample norm from 1.
    double norm_drift() const {
        double worst = 0.0;
        for (const Vec3& v : values_) worst = std::max(worst, std::abs(norm(v) - 1.0));
        return worst;
    }

    bool is_unit(double tol = unit_norm_tol) const { return norm_drift() <= tol; }

  private:
    Grid grid_;
    std::vector<Vec3> values_;
};

// Mobile-frame coordinate pair r = (r1, r2) on a shared grid.
class PairField {
  public:
    explicit PairField(const Grid& g) : r1_(g), r2_(g) {}

    PairField(ScalarField r1, ScalarField r2)
        : r1_(std::move(r1)), r2_(std::move(r2)) {
        if (!(r1_.grid() == r2_.grid()))
            throw grid_mismatch("PairField: components on different grids");
    }

    const Grid& grid() const { return r1_.grid(); }
    int size() const { return r1_.size(); }
    const ScalarField& r1() const { return r1_; }
    const ScalarField& r2() const { return r2_; }
    ScalarField& r1() { return r1_; }
    ScalarField& r2() { return r2_; }

    double sup_norm() const {
        double m = 0.0;
        for (int i = 0; i < size(); ++i)
            m = std::max({m, std::abs(r1_[i]), std::abs(r2_[i])});
        return m;
    }

    // max over nodes of r1^2 + r2^2
    double sup_sq() const {
        double m = 0.0;
        for (int i = 0; i < size(); ++i)
            m = std::max(m, r1_[i] * r1_[i] + r2_[i] * r2_[i]);
        return m;
    }

  private:
    ScalarField r1_, r2_;
};

// Travelling wall parameters (delta, theta, sigma): applied field strength,
// rotation angle, translation.
struct WallParams {
    double delta = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
};

// Piecewise-constant control t -> delta(t), right-continuous, with one level
// per interval between consecutive breakpoints and a final level beyond the
// last breakpoint.
class ControlSchedule {
  public:
    static ControlSchedule constant(double level) {
        return ControlSchedule({}, {level});
    }

    // levels.size() must be breakpoints.size() + 1
    ControlSchedule(std::vector<double> breakpoints, std::vector<double> levels)
        : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
        if (levels_.size() != breakpoints_.size() + 1)
            throw std::invalid_argument("ControlSchedule: need one more level than breakpoints");
        for (std::size_t i = 1; i < breakpoints_.size(); ++i)
            if (!(breakpoints_[i - 1] < breakpoints_[i]))
                throw std::invalid_argument("ControlSchedule: breakpoints must be strictly increasing");
    }

    double operator()(double t) const {
        // upper_bound puts t == breakpoint into the interval after it
        // (right-continuity)
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
        return levels_[it - breakpoints_.begin()];
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& levels() const { return levels_; }

  private:
    std::vector<double> breakpoints_;
    std::vector<double> levels_;
};

} // namespace llgwall
