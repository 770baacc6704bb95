#include "fracmin/grid.hpp"

#include <cmath>
#include <string>

#include "fracmin/errors.hpp"

namespace fracmin {

Grid::Grid(int dim, double box_length, int points_per_dim, double s)
    : dim_(dim), box_length_(box_length), points_per_dim_(points_per_dim), s_(s) {
    if (dim != 1 && dim != 2)
        throw DimensionUnsupported("grid dimension must be 1 or 2, got " + std::to_string(dim));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw ConfigError("rule violated: box_length > 0");
    if (points_per_dim <= 0 || points_per_dim % 2 != 0)
        throw ConfigError("rule violated: points_per_dim is a positive even integer, got " +
                          std::to_string(points_per_dim));
    if (!(s > 0.0) || !(s < 1.0))
        throw ConfigError("rule violated: 0 < s < 1, got s = " + std::to_string(s));
}

double Grid::cell_volume() const noexcept {
    const double h = spacing();
    return dim_ == 1 ? h : h * h;
}

std::size_t Grid::total_points() const noexcept {
    const auto m = static_cast<std::size_t>(points_per_dim_);
    return dim_ == 1 ? m : m * m;
}

double Grid::coord(int index) const noexcept {
    return -0.5 * box_length_ + index * spacing();
}

double Grid::freq(int index) const noexcept {
    // FFT storage order: 0, 1, .., M/2-1, -M/2, .., -1.
    const int m = points_per_dim_;
    const int k = index < m / 2 ? index : index - m;
    return 2.0 * M_PI * k / box_length_;
}

Point Grid::node(std::size_t flat) const noexcept {
    const auto m = static_cast<std::size_t>(points_per_dim_);
    if (dim_ == 1) return {coord(static_cast<int>(flat)), 0.0};
    return {coord(static_cast<int>(flat % m)), coord(static_cast<int>(flat / m))};
}

double Grid::torus_distance(const Point& a, const Point& b) const noexcept {
    double sum = 0.0;
    for (int ax = 0; ax < dim_; ++ax) {
        double d = std::fabs(a[ax] - b[ax]);
        d = std::fmod(d, box_length_);
        if (d > 0.5 * box_length_) d = box_length_ - d;
        sum += d * d;
    }
    return std::sqrt(sum);
}

bool Grid::operator==(const Grid& other) const noexcept {
    return dim_ == other.dim_ && box_length_ == other.box_length_ &&
           points_per_dim_ == other.points_per_dim_ && s_ == other.s_;
}

}  // namespace fracmin
