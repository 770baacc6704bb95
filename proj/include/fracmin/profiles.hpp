#pragma once

#include <functional>
#include <string>

#include "fracmin/field.hpp"

namespace fracmin {

// Closed-form radial profile phi(|x|) with decay metadata. support_radius is
// the radius beyond which the profile's squared-mass tail is negligible
// (~1e-5 relative); dilate uses it to refuse configurations whose tails would
// wrap around the periodic box.
struct Profile {
    std::string name;
    std::function<double(double)> radial;  // value at radius r >= 0
    double support_radius = 0.0;
};

Profile gaussian_profile();       // exp(-r^2)
Profile sech_profile();           // sech(r)
Profile sech2_profile();          // sech(r)^2
Profile rational_bump_profile();  // 2 / (1 + r^2)

// Sample the profile on the grid (no dilation): u(x) = phi(|x|).
Field sample_profile(const Profile& phi, const Grid& grid);

// Mass-preserving dilation phi_lambda(x) = lambda^{N/2} * phi(lambda * x),
// sampled on the grid. Throws ProfileOverflow when the dilated support,
// support_radius / lambda, exceeds L/2 (the tail would alias).
Field dilate(const Profile& phi, double lambda, const Grid& grid);

}  // namespace fracmin
