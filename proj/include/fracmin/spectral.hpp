#pragma once

#include <complex>
#include <map>
#include <vector>

#include "fracmin/field.hpp"

namespace fracmin {

// Discrete Fourier transform pair under the Parseval normalization
//
//     h^N sum_j |u_j|^2 = sum_k |u_hat_k|^2,
//
// which makes spectral sums directly comparable to nodal integrals.
// Coefficients are stored in FFT order (frequency for flat index j given by
// Grid::freq per axis). dft_inverse(dft_forward(u)) == u to roundoff.
std::vector<std::complex<double>> dft_forward(const Field& u);
Field dft_inverse(const Grid& grid, const std::vector<std::complex<double>>& coeffs);

// Fractional kinetic energy sum_k |xi_k|^{2s} |u_hat_k|^2 (the squared
// fractional-gradient seminorm). Zero exactly on constants.
double frac_kinetic(const Field& u);

// Apply the fractional Laplacian: multiplier |xi|^{2s} in frequency space.
// Self-adjoint, and <apply(u), u> == frac_kinetic(u).
Field frac_laplacian_apply(const Field& u);

// Dual-space norm |g|_{H^-s}^2 = sum_k |g_hat_k|^2 / (1 + |xi_k|^{2s}).
double hminus_norm(const Field& g);

// Exact (spectral) periodic translation: result(x) = u(x + shift). Mass and
// kinetic energy are invariant to roundoff; shift need not be a grid multiple.
Field spectral_translate(const Field& u, const Point& shift);

// Norms evaluated under one roof so their mutual identities hold by
// construction: hs_norm^2 = mass + kinetic with mass taken nodally (equality
// with the spectral mass is the Parseval contract, tested, not assumed).
struct NormBundle {
    double mass = 0.0;
    double kinetic = 0.0;
    double hs_norm = 0.0;
    std::map<double, double> lp_norms;
};

NormBundle compute_norms(const Field& u, const std::vector<double>& lp_exponents = {2.0});

}  // namespace fracmin
