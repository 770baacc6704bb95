#include "fracmin/field.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "fracmin/errors.hpp"

namespace fracmin {

namespace {

void require_same_grid(const Field& u, const Field& v) {
    if (u.grid() != v.grid())
        throw ConfigError("rule violated: fields must share one grid");
}

}  // namespace

Field::Field(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.total_points())
        throw ConfigError("rule violated: value count " + std::to_string(values_.size()) +
                          " != grid points " + std::to_string(grid_.total_points()));
    for (double v : values_)
        if (!std::isfinite(v))
            throw ConfigError("rule violated: all field values finite");
}

Field Field::zeros(const Grid& grid) {
    return Field(grid, std::vector<double>(grid.total_points(), 0.0));
}

Field Field::sample(const Grid& grid, const std::function<double(const Point&)>& f) {
    std::vector<double> vals(grid.total_points());
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = f(grid.node(j));
    return Field(grid, std::move(vals));
}

double mass(const Field& u) {
    double sum = 0.0;
    for (double v : u.values()) sum += v * v;
    return u.grid().cell_volume() * sum;
}

double inner(const Field& u, const Field& v) {
    require_same_grid(u, v);
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * v[j];
    return u.grid().cell_volume() * sum;
}

double l2_norm(const Field& u) { return std::sqrt(mass(u)); }

double lp_norm(const Field& u, double p) {
    if (!(p >= 1.0)) throw ConfigError("rule violated: Lp exponent p >= 1");
    double sum = 0.0;
    for (double v : u.values()) sum += std::pow(std::fabs(v), p);
    return std::pow(u.grid().cell_volume() * sum, 1.0 / p);
}

Field scale(double a, const Field& u) {
    std::vector<double> vals(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) vals[j] = a * u[j];
    return Field(u.grid(), std::move(vals));
}

Field add(const Field& u, const Field& v) {
    require_same_grid(u, v);
    std::vector<double> vals(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) vals[j] = u[j] + v[j];
    return Field(u.grid(), std::move(vals));
}

Field sub(const Field& u, const Field& v) {
    require_same_grid(u, v);
    std::vector<double> vals(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) vals[j] = u[j] - v[j];
    return Field(u.grid(), std::move(vals));
}

Field axpy(double a, const Field& x, const Field& y) {
    require_same_grid(x, y);
    std::vector<double> vals(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) vals[j] = a * x[j] + y[j];
    return Field(x.grid(), std::move(vals));
}

Field normalize_mass(const Field& u, double c2) {
    if (!(c2 > 0.0)) throw ConfigError("rule violated: target mass c2 > 0");
    const double m = mass(u);
    if (m <= 0.0) throw ZeroField("cannot normalize a field with zero mass");
    return scale(std::sqrt(c2 / m), u);
}

}  // namespace fracmin
