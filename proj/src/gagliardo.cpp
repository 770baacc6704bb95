#include "fracmin/gagliardo.hpp"

#include <cmath>
#include <vector>

#include "fracmin/errors.hpp"

namespace fracmin {

namespace {

constexpr int kernel_images = 64;  // explicit periodization images per side

// integral_lo^hi r^{p-1-2s} dr, the exact kernel moments used by the product
// integration (logarithmic when the exponent vanishes, e.g. p = 1 at s = 1/2).
double kernel_moment(int p, double s, double lo, double hi) {
    const double e = p - 2.0 * s;
    if (std::fabs(e) < 1e-14) return std::log(hi / lo);
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

// Smooth part of the periodized kernel: K_p(r) - r^{-1-2s}, i.e. the images
// n != 0 summed explicitly plus a midpoint-rule tail for |n| > kernel_images.
double image_kernel(double r, double L, double s) {
    double w = 0.0;
    for (int n = 1; n <= kernel_images; ++n)
        w += std::pow(n * L - r, -1.0 - 2.0 * s) + std::pow(n * L + r, -1.0 - 2.0 * s);
    const double t = (kernel_images + 0.5) * L;
    w += (std::pow(t + r, -2.0 * s) + std::pow(t - r, -2.0 * s)) / (2.0 * s * L);
    return w;
}

}  // namespace

double gagliardo_constant(int dim, double s) {
    if (dim != 1 && dim != 2)
        throw DimensionUnsupported("gagliardo_constant defined for dim in {1,2}");
    if (!(s > 0.0) || !(s < 1.0)) throw ConfigError("rule violated: 0 < s < 1");
    return s * std::pow(4.0, s) * std::tgamma(0.5 * dim + s) /
           (std::pow(M_PI, 0.5 * dim) * std::tgamma(1.0 - s));
}

double gagliardo_kinetic_1d(const Field& u) {
    const Grid& grid = u.grid();
    if (grid.dim() != 1)
        throw DimensionUnsupported("gagliardo_kinetic_1d requires a 1-D grid");

    const int m_total = grid.points_per_dim();
    const double h = grid.spacing();
    const double L = grid.box_length();
    const double s = grid.s();
    const int n_half = m_total / 2;

    // Periodic correlation g[m] = h * sum_j (u_j - u_{j+m})^2, computed by
    // direct summation so this oracle shares no machinery with the FFT path.
    std::vector<double> g(n_half + 1, 0.0);
    const std::vector<double>& v = u.values();
    for (int m = 1; m <= n_half; ++m) {
        double sum = 0.0;
        for (int j = 0; j < m_total; ++j) {
            const int jm = j + m < m_total ? j + m : j + m - m_total;
            const double d = v[j] - v[jm];
            sum += d * d;
        }
        g[m] = h * sum;
    }

    // --- singular kernel part: integral_0^{L/2} g(r) r^{-1-2s} dr ----------
    // On [0, 2h]: g is even with g(0) = 0, so fit a r^2 + b r^4 through
    // (h, g1), (2h, g2) and integrate against the exact moments.
    const double g1 = g[1], g2 = g[std::min(2, n_half)];
    const double a = (16.0 * g1 - g2) / (12.0 * h * h);
    const double b = (g2 - 4.0 * g1) / (12.0 * h * h * h * h);
    double singular = a * std::pow(2.0 * h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) +
                      b * std::pow(2.0 * h, 4.0 - 2.0 * s) / (4.0 - 2.0 * s);

    // Beyond 2h: piecewise quadratics in g against exact kernel moments.
    int m = 2;
    while (m + 2 <= n_half) {
        const double r0 = m * h, r1 = (m + 1) * h, r2 = (m + 2) * h;
        const double c0 = g[m] / ((r0 - r1) * (r0 - r2));
        const double c1 = g[m + 1] / ((r1 - r0) * (r1 - r2));
        const double c2 = g[m + 2] / ((r2 - r0) * (r2 - r1));
        const double a2 = c0 + c1 + c2;
        const double a1 = -(c0 * (r1 + r2) + c1 * (r0 + r2) + c2 * (r0 + r1));
        const double a0 = c0 * r1 * r2 + c1 * r0 * r2 + c2 * r0 * r1;
        singular += a0 * kernel_moment(0, s, r0, r2) + a1 * kernel_moment(1, s, r0, r2) +
                    a2 * kernel_moment(2, s, r0, r2);
        m += 2;
    }
    if (m < n_half) {  // odd leftover cell: linear product integration
        const double r0 = m * h, r1 = (m + 1) * h;
        const double b1 = (g[m + 1] - g[m]) / h;
        const double b0 = g[m] - b1 * r0;
        singular += b0 * kernel_moment(0, s, r0, r1) + b1 * kernel_moment(1, s, r0, r1);
    }

    // --- image part: smooth, composite Simpson on the correlation lattice --
    std::vector<double> integrand(n_half + 1);
    integrand[0] = 0.0;  // g(0) = 0
    for (int j = 1; j <= n_half; ++j) integrand[j] = g[j] * image_kernel(j * h, L, s);

    double regular = 0.0;
    int intervals = n_half;
    int start = 0;
    if (intervals % 2 != 0) {  // peel a 3/8 block so Simpson gets an even count
        if (intervals >= 3) {
            regular += 3.0 * h / 8.0 *
                       (integrand[0] + 3.0 * integrand[1] + 3.0 * integrand[2] + integrand[3]);
            start = 3;
            intervals -= 3;
        } else {  // single interval: trapezoid
            regular += 0.5 * h * (integrand[0] + integrand[1]);
            start = 1;
            intervals = 0;
        }
    }
    if (intervals > 0) {
        double acc = integrand[start] + integrand[start + intervals];
        for (int j = start + 1; j < start + intervals; j += 2) acc += 4.0 * integrand[j];
        for (int j = start + 2; j < start + intervals; j += 2) acc += 2.0 * integrand[j];
        regular += acc * h / 3.0;
    }

    return gagliardo_constant(1, s) * (singular + regular);
}

}  // namespace fracmin
