#pragma once

#include <array>
#include <cstddef>

namespace fracmin {

// A point of the (at most two-dimensional) box; the second component is zero
// and ignored when dim == 1.
using Point = std::array<double, 2>;

// Uniform periodic discretization of the box [-L/2, L/2)^N, N in {1,2},
// carrying the fractional order s of the kinetic operator. Immutable.
//
// Nodes per axis:     x_j = -L/2 + j*h,  h = L/M,  j = 0..M-1
// Frequency lattice:  xi_k = 2*pi*k/L,   k = -M/2..M/2-1 (FFT storage order)
// Flat node index:    x varies fastest (row-major in (y,x) for N = 2).
class Grid {
public:
    Grid(int dim, double box_length, int points_per_dim, double s);

    int dim() const noexcept { return dim_; }
    double box_length() const noexcept { return box_length_; }
    int points_per_dim() const noexcept { return points_per_dim_; }
    double s() const noexcept { return s_; }

    double spacing() const noexcept { return box_length_ / points_per_dim_; }
    double cell_volume() const noexcept;   // h^N
    std::size_t total_points() const noexcept;  // M^N

    double coord(int index) const noexcept;  // node coordinate along one axis
    double freq(int index) const noexcept;   // xi for FFT-ordered index 0..M-1

    Point node(std::size_t flat) const noexcept;

    // Distance on the torus (periodic wrap per axis).
    double torus_distance(const Point& a, const Point& b) const noexcept;

    bool operator==(const Grid& other) const noexcept;
    bool operator!=(const Grid& other) const noexcept { return !(*this == other); }

private:
    int dim_;
    double box_length_;
    int points_per_dim_;
    double s_;
};

}  // namespace fracmin
