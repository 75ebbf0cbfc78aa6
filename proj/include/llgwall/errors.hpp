#pragma once

#include <stdexcept>
#include <string>

namespace llgwall {

// Structural misuse: fields on different grids combined in one operation.
struct grid_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// sphere_project on a (near-)zero vector.
struct degenerate_vector : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The mobile-frame decomposition is only valid near the wall; thrown when a
// field leaves the hemisphere <v,M0> > 0 or the Newton solve for the
// symmetry coordinates does not converge.
struct out_of_chart : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inputs outside the a priori regime |r|^2 <= 1/2, |delta| <= 1.
struct out_of_regime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Time integration left the sphere by more than the blow-up threshold;
// carries the simulation time at which it happened.
struct blow_up : std::runtime_error {
    double time;
    blow_up(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
};

// Wall tracker found no (or more than one) sign change in u1.
struct no_wall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// decay_fit preconditions violated (too few samples, nonpositive values).
struct decay_fit_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Config file problems: missing file, unknown key, duplicate key, bad value.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace llgwall
