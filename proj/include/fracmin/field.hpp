#pragma once

#include <functional>
#include <vector>

#include "fracmin/grid.hpp"

namespace fracmin {

// Real-valued samples of a function on the nodes of a Grid. Treated as an
// immutable value: every operation returns a fresh Field, and construction
// validates that all samples are finite.
class Field {
public:
    Field(Grid grid, std::vector<double> values);

    static Field zeros(const Grid& grid);
    static Field sample(const Grid& grid, const std::function<double(const Point&)>& f);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    Grid grid_;
    std::vector<double> values_;
};

// Discrete integrals against the nodal measure h^N.
double mass(const Field& u);                      // h^N sum u^2
double inner(const Field& u, const Field& v);     // h^N sum u*v
double l2_norm(const Field& u);
double lp_norm(const Field& u, double p);

// Elementwise arithmetic (grids must match).
Field scale(double a, const Field& u);
Field add(const Field& u, const Field& v);
Field sub(const Field& u, const Field& v);
Field axpy(double a, const Field& x, const Field& y);  // a*x + y

// Rescale onto the mass sphere: mass(result) = c2. Throws ZeroField when
// mass(u) = 0 (no direction to preserve).
Field normalize_mass(const Field& u, double c2);

}  // namespace fracmin
