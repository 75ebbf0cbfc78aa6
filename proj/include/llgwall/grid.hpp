#pragma once

#include <stdexcept>

namespace llgwall {

// Uniform symmetric grid on [-X, X] with N nodes, x_i = -X + i*h.
// N odd keeps x = 0 on the grid.
class Grid {
  public:
    Grid(double half_width, int n_points)
        : half_width_(half_width), n_(n_points) {
        if (n_ < 8)
            throw std::invalid_argument("Grid: need at least 8 nodes");
        if (!(half_width_ > 0.0))
            throw std::invalid_argument("Grid: half_width must be positive");
    }

    double half_width() const { return half_width_; }
    int n() const { return n_; }
    double spacing() const { return 2.0 * half_width_ / (n_ - 1); }
    double node(int i) const { return -half_width_ + i * spacing(); }

    bool operator==(const Grid&) const = default;

  private:
    double half_width_;
    int n_;
};

} // namespace llgwall
