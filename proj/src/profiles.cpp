#include "fracmin/profiles.hpp"

#include <cmath>

#include "fracmin/errors.hpp"

namespace fracmin {

// support_radius values are where the squared-mass tail drops below ~1e-5 of
// the total, not where the profile "looks" zero: the rational bump needs the
// generous radius because it only decays like r^-2.
Profile gaussian_profile() {
    return {"gaussian", [](double r) { return std::exp(-r * r); }, 3.0};
}

Profile sech_profile() {
    return {"sech", [](double r) { return 1.0 / std::cosh(r); }, 6.5};
}

Profile sech2_profile() {
    return {"sech2",
            [](double r) {
                const double c = std::cosh(r);
                return 1.0 / (c * c);
            },
            3.5};
}

Profile rational_bump_profile() {
    return {"rational_bump", [](double r) { return 2.0 / (1.0 + r * r); }, 28.0};
}

Field sample_profile(const Profile& phi, const Grid& grid) { return dilate(phi, 1.0, grid); }

Field dilate(const Profile& phi, double lambda, const Grid& grid) {
    if (!(lambda > 0.0)) throw ConfigError("rule violated: dilation lambda > 0");
    const double support = phi.support_radius / lambda;
    if (support > 0.5 * grid.box_length())
        throw ProfileOverflow("dilated " + phi.name + " support " + std::to_string(support) +
                              " exceeds half box " + std::to_string(0.5 * grid.box_length()));
    const double amp = std::pow(lambda, 0.5 * grid.dim());
    return Field::sample(grid, [&](const Point& x) {
        const double r = grid.dim() == 1 ? std::fabs(x[0]) : std::hypot(x[0], x[1]);
        return amp * phi.radial(lambda * r);
    });
}

}  // namespace fracmin
