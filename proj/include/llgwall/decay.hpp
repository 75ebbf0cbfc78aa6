#pragma once

#include <cmath>
#include <span>
#include <utility>

#include "llgwall/errors.hpp"

namespace llgwall {

struct DecayFit {
    double rate = 0.0;       // magnitude of the fitted slope of log(value)
    double r_squared = 0.0;  // fit quality
};

// Least-squares line through (t, log value) for samples with t >= skip.
// Needs at least 10 positive samples.
inline DecayFit decay_fit(std::span<const std::pair<double, double>> series,
                          double skip = 0.0) {
    double st = 0, sv = 0, stt = 0, stv = 0, svv = 0;
    long n = 0;
    for (const auto& [t, v] : series) {
        if (t < skip) continue;
        if (!(v > 0.0))
            throw decay_fit_error("decay_fit: nonpositive value (decay lost to noise floor)");
        const double lv = std::log(v);
        st += t;
        sv += lv;
        stt += t * t;
        stv += t * lv;
        svv += lv * lv;
        ++n;
    }
    if (n < 10) throw decay_fit_error("decay_fit: need at least 10 samples after the skip");

    const double den = n * stt - st * st;
    const double slope = (n * stv - st * sv) / den;
    const double ss_tot = svv - sv * sv / n;
    double r2 = 1.0;
    if (ss_tot > 0.0) {
        const double ss_res = ss_tot - slope * slope * den / n;
        r2 = 1.0 - ss_res / ss_tot;
    }
    return {std::abs(slope), r2};
}

} // namespace llgwall
