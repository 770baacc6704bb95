#pragma once

#include <json.hpp>

#include "fracmin/field.hpp"
#include "fracmin/nonlinearity.hpp"
#include "fracmin/spectral.hpp"

namespace fracmin {

// One evaluation of the constrained energy and its first-order diagnostics.
struct EnergyReport {
    double kinetic = 0.0;     // (1/2) sum_k |xi_k|^{2s} |u_hat_k|^2
    double potential = 0.0;   // h^N sum_j F(x_j, u_j)
    double total = 0.0;       // kinetic - potential
    double mass = 0.0;
    double lambda = 0.0;      // multiplier estimate <grad J(u), u> / mass(u)
    double el_residual = 0.0; // |grad J(u) - lambda u|_2 / |u|_{H^s}
    double hminus_gradient_norm = 0.0;

    nlohmann::json to_json() const;
};

// Potential term h^N sum_j F(x_j, u_j) under the same nodal measure as mass().
double potential_integral(const Field& u, const NonlinearitySpec& spec);

// J(u) = (1/2)|grad_s u|^2 - integral of F(x, u); defined for any field.
double energy_value(const Field& u, const NonlinearitySpec& spec);

// L^2 gradient of J: (-Delta)^s u - dF(x, u); the mass constraint is handled
// by the flow, not here.
Field gradient(const Field& u, const NonlinearitySpec& spec);

// Multiplier lambda(u) making grad J(u) - lambda u orthogonal to u.  At a
// critical point of J on the mass sphere, grad J(u) = lambda u holds exactly.
double lagrange_multiplier(const Field& u, const NonlinearitySpec& spec);

// Scale-free first-order criticality measure; zero (to tolerance) exactly on
// constrained critical points.
double el_residual(const Field& u, const NonlinearitySpec& spec);

// |u|_{H^s} = sqrt(mass + kinetic seminorm squared).
double hs_norm(const Field& u);

// Full report; requires mass(u) > 0 (ZeroField otherwise).
EnergyReport energy(const Field& u, const NonlinearitySpec& spec);

}  // namespace fracmin
