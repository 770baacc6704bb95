#include "fracmin/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "fracmin/errors.hpp"

namespace fracmin {

namespace {

// FFTW's planner is not thread-safe; executing distinct plans on their own
// buffers is. Each thread keeps its own plan+workspace per (dim, M), and plan
// creation is serialized by a global mutex. FFTW_ESTIMATE keeps the chosen
// algorithm independent of runtime timing, which the determinism contract of
// the runner depends on.
std::mutex planner_mutex;

struct PlanSet {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t n = 0;

    PlanSet() = default;
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
    PlanSet(PlanSet&& other) noexcept { *this = std::move(other); }
    PlanSet& operator=(PlanSet&& other) noexcept {
        std::swap(forward, other.forward);
        std::swap(backward, other.backward);
        std::swap(buf, other.buf);
        std::swap(n, other.n);
        return *this;
    }
    ~PlanSet() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (buf) fftw_free(buf);
    }
};

PlanSet make_plans(int dim, int m) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    PlanSet p;
    p.n = dim == 1 ? static_cast<std::size_t>(m)
                   : static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    p.buf = fftw_alloc_complex(p.n);
    if (dim == 1) {
        p.forward = fftw_plan_dft_1d(m, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.backward = fftw_plan_dft_1d(m, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        p.forward = fftw_plan_dft_2d(m, m, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.backward = fftw_plan_dft_2d(m, m, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    return p;
}

PlanSet& plans_for(const Grid& grid) {
    thread_local std::map<std::pair<int, int>, PlanSet> cache;
    const auto key = std::make_pair(grid.dim(), grid.points_per_dim());
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, make_plans(grid.dim(), grid.points_per_dim())).first;
    return it->second;
}

// The flat index (x fastest) maps to per-axis FFT frequency indices.
// For N=2 FFTW's row-major plan_dft_2d(m, m) treats the first index as the
// slow one, matching our (y slow, x fast) layout.
inline double freq_sq(const Grid& grid, std::size_t flat) {
    const int m = grid.points_per_dim();
    if (grid.dim() == 1) {
        const double xi = grid.freq(static_cast<int>(flat));
        return xi * xi;
    }
    const double xix = grid.freq(static_cast<int>(flat % static_cast<std::size_t>(m)));
    const double xiy = grid.freq(static_cast<int>(flat / static_cast<std::size_t>(m)));
    return xix * xix + xiy * xiy;
}

}  // namespace

std::vector<std::complex<double>> dft_forward(const Field& u) {
    const Grid& g = u.grid();
    PlanSet& p = plans_for(g);
    for (std::size_t j = 0; j < p.n; ++j) {
        p.buf[j][0] = u[j];
        p.buf[j][1] = 0.0;
    }
    fftw_execute(p.forward);
    // Scale so that sum_k |u_hat|^2 = h^N sum_j |u_j|^2.
    const double scale = std::sqrt(g.cell_volume() / static_cast<double>(g.total_points()));
    std::vector<std::complex<double>> out(p.n);
    for (std::size_t k = 0; k < p.n; ++k)
        out[k] = std::complex<double>(scale * p.buf[k][0], scale * p.buf[k][1]);
    return out;
}

Field dft_inverse(const Grid& grid, const std::vector<std::complex<double>>& coeffs) {
    if (coeffs.size() != grid.total_points())
        throw ConfigError("rule violated: coefficient count matches grid points");
    PlanSet& p = plans_for(grid);
    for (std::size_t k = 0; k < p.n; ++k) {
        p.buf[k][0] = coeffs[k].real();
        p.buf[k][1] = coeffs[k].imag();
    }
    fftw_execute(p.backward);
    const double scale =
        1.0 / std::sqrt(grid.cell_volume() * static_cast<double>(grid.total_points()));
    std::vector<double> vals(p.n);
    for (std::size_t j = 0; j < p.n; ++j) vals[j] = scale * p.buf[j][0];
    return Field(grid, std::move(vals));
}

double frac_kinetic(const Field& u) {
    const Grid& g = u.grid();
    const auto coeffs = dft_forward(u);
    const double s = g.s();
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double q = freq_sq(g, k);
        if (q == 0.0) continue;  // |xi|^{2s} = 0 at the zero mode for s in (0,1)
        sum += std::pow(q, s) * std::norm(coeffs[k]);
    }
    return sum;
}

Field frac_laplacian_apply(const Field& u) {
    const Grid& g = u.grid();
    auto coeffs = dft_forward(u);
    const double s = g.s();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double q = freq_sq(g, k);
        coeffs[k] *= q == 0.0 ? 0.0 : std::pow(q, s);
    }
    return dft_inverse(g, coeffs);
}

double hminus_norm(const Field& gfield) {
    const Grid& g = gfield.grid();
    const auto coeffs = dft_forward(gfield);
    const double s = g.s();
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double q = freq_sq(g, k);
        const double mult = q == 0.0 ? 1.0 : 1.0 + std::pow(q, s);
        sum += std::norm(coeffs[k]) / mult;
    }
    return std::sqrt(sum);
}

Field spectral_translate(const Field& u, const Point& shift) {
    const Grid& g = u.grid();
    auto coeffs = dft_forward(u);
    const int m = g.points_per_dim();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        double phase;
        if (g.dim() == 1) {
            phase = g.freq(static_cast<int>(k)) * shift[0];
        } else {
            phase = g.freq(static_cast<int>(k % static_cast<std::size_t>(m))) * shift[0] +
                    g.freq(static_cast<int>(k / static_cast<std::size_t>(m))) * shift[1];
        }
        coeffs[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return dft_inverse(g, coeffs);
}

NormBundle compute_norms(const Field& u, const std::vector<double>& lp_exponents) {
    NormBundle b;
    b.mass = mass(u);
    b.kinetic = frac_kinetic(u);
    b.hs_norm = std::sqrt(b.mass + b.kinetic);
    for (double p : lp_exponents) b.lp_norms[p] = lp_norm(u, p);
    return b;
}

}  // namespace fracmin
