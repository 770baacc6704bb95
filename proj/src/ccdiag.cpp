#include "fracmin/ccdiag.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <future>
#include <numeric>
#include <random>
#include <sstream>

#include "fracmin/errors.hpp"
#include "fracmin/spectral.hpp"

namespace fracmin {

namespace {

// Ball indicator centered at node 0 (per-axis coordinate -L/2), the reference
// point for circular correlation; also reports the node count for the exact
// discrete volume fraction.
std::pair<Field, double> ball_indicator(const Grid& grid, double R) {
    const Point origin = grid.node(0);
    double count = 0.0;
    std::vector<double> values(grid.total_points());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const bool in = grid.torus_distance(grid.node(j), origin) <= R;
        values[j] = in ? 1.0 : 0.0;
        count += values[j];
    }
    return {Field(grid, std::move(values)), count / static_cast<double>(grid.total_points())};
}

Field squared(const Field& u) {
    std::vector<double> values(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) values[j] = u[j] * u[j];
    return Field(u.grid(), std::move(values));
}

// Q(y) at every center y simultaneously: h^N (u^2 star chi)(y) via the DFT
// convolution theorem under the Parseval normalization.
Field q_field(const std::vector<std::complex<double>>& u2_hat, const Field& chi) {
    const Grid& g = chi.grid();
    std::vector<std::complex<double>> prod = dft_forward(chi);
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] *= u2_hat[k];
    Field corr = dft_inverse(g, prod);
    const double scale =
        std::sqrt(g.cell_volume() * static_cast<double>(g.total_points()));
    std::vector<double> values(corr.size());
    for (std::size_t j = 0; j < corr.size(); ++j) values[j] = scale * corr[j];
    return Field(g, std::move(values));
}

// Argmax with ties resolved to the smallest flat index.
std::size_t arg_max(const Field& q) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < q.size(); ++j)
        if (q[j] > q[best]) best = j;
    return best;
}

void check_radius(const Grid& grid, double R) {
    if (!(R > 0.0)) throw ConfigError("ball radius must be positive");
    if (R > 0.5 * grid.box_length())
        throw RadiusTooLarge("ball radius " + std::to_string(R) +
                             " exceeds half the box length " +
                             std::to_string(0.5 * grid.box_length()));
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

Concentration concentration_function(const Field& u, double R) {
    check_radius(u.grid(), R);
    const Field q = q_field(dft_forward(squared(u)), ball_indicator(u.grid(), R).first);
    const std::size_t best = arg_max(q);
    Concentration out;
    out.Q = std::clamp(q[best], 0.0, mass(u));
    out.center = u.grid().node(best);
    return out;
}

std::pair<Field, Field> split_sequence(const Field& u, const Point& y, double R0,
                                       double Rn) {
    const Grid& g = u.grid();
    if (!(R0 > 0.0 && 2.0 * R0 < Rn && 2.0 * Rn <= 0.5 * g.box_length())) {
        std::ostringstream msg;
        msg << "cutoff radii must satisfy 0 < 2*R0 < Rn and 2*Rn <= L/2 (R0 = " << R0
            << ", Rn = " << Rn << ", L = " << g.box_length() << ")";
        throw RadiusOrder(msg.str());
    }
    std::vector<double> inner(u.size()), outer(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double r = g.torus_distance(g.node(j), y);
        double phi = 0.0;  // 1 on B(R0), 0 beyond 2*R0
        if (r <= R0)
            phi = 1.0;
        else if (r < 2.0 * R0)
            phi = 1.0 - smoothstep((r - R0) / R0);
        double psi = 1.0;  // 0 on B(Rn), 1 beyond 2*Rn
        if (r <= Rn)
            psi = 0.0;
        else if (r < 2.0 * Rn)
            psi = smoothstep((r - Rn) / Rn);
        inner[j] = phi * u[j];
        outer[j] = psi * u[j];
    }
    return {Field(g, std::move(inner)), Field(g, std::move(outer))};
}

FieldSequence field_sequence(std::vector<Field> fields) {
    if (fields.empty()) throw ConfigError("field sequence must be nonempty");
    FieldSequence seq;
    seq.c2 = mass(fields.front());
    if (!(seq.c2 > 0.0)) throw ZeroField("field sequence has zero mass");
    for (const Field& f : fields) {
        if (f.grid() != fields.front().grid())
            throw ConfigError("field sequence must live on a single grid");
        if (std::fabs(mass(f) - seq.c2) > 1e-8 * seq.c2)
            throw ConfigError("field sequence masses must agree to relative 1e-8");
    }
    seq.fields = std::move(fields);
    return seq;
}

std::string cc_verdict_name(CCVerdict v) {
    switch (v) {
        case CCVerdict::vanishing: return "vanishing";
        case CCVerdict::dichotomy: return "dichotomy";
        case CCVerdict::compactness: return "compactness";
    }
    return "unknown";
}

namespace {

struct QRow {
    std::vector<double> q;        // per ladder radius
    std::vector<Point> centers;   // maximizing center per radius
};

// Longest ladder run where Q varies by at most eps per step; {first, last}
// inclusive, or first > last when none of length >= 3 exists.
std::pair<int, int> longest_plateau(const std::vector<double>& q, double eps) {
    int best_lo = 0, best_hi = -1;
    int lo = 0;
    for (int i = 1; i <= static_cast<int>(q.size()); ++i) {
        const bool extend =
            i < static_cast<int>(q.size()) && std::fabs(q[i] - q[i - 1]) <= eps;
        if (!extend) {
            if (i - 1 - lo > best_hi - best_lo) {
                best_lo = lo;
                best_hi = i - 1;
            }
            lo = i;
        }
    }
    if (best_hi - best_lo + 1 < 3) return {0, -1};
    return {best_lo, best_hi};
}

}  // namespace

CCClassification classify(const FieldSequence& seq, const std::vector<double>& eps_ladder,
                          std::vector<double> r_ladder) {
    const int n = static_cast<int>(seq.fields.size());
    if (n < 4) throw ConfigError("classification needs at least four fields");
    if (eps_ladder.empty()) throw ConfigError("epsilon ladder must be nonempty");
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        if (!(eps_ladder[i] > 0.0))
            throw ConfigError("epsilon ladder entries must be positive");
        if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
            throw ConfigError("epsilon ladder must be strictly decreasing");
    }
    const Grid& g = seq.fields.front().grid();
    const double L = g.box_length();
    if (r_ladder.empty()) {
        for (int i = 0; i < 12; ++i)
            r_ladder.push_back(L / 64.0 + (L / 4.0 - L / 64.0) * i / 11.0);
    }
    if (!std::is_sorted(r_ladder.begin(), r_ladder.end()))
        throw ConfigError("radius ladder must be ascending");
    for (double R : r_ladder) check_radius(g, R);

    const int n_r = static_cast<int>(r_ladder.size());
    const double c2 = seq.c2;
    const double eps_min = eps_ladder.back();

    // Ball transforms are shared across fields; per-field rows run in
    // parallel and the reduction below is sequential and deterministic.
    std::vector<Field> balls;
    std::vector<double> volfrac;
    for (double R : r_ladder) {
        auto [chi, vf] = ball_indicator(g, R);
        balls.push_back(std::move(chi));
        volfrac.push_back(vf);
    }
    std::vector<std::future<QRow>> futures;
    for (int k = 0; k < n; ++k) {
        futures.push_back(std::async(std::launch::async, [&, k] {
            QRow row;
            const auto u2_hat = dft_forward(squared(seq.fields[k]));
            for (const Field& chi : balls) {
                const Field q = q_field(u2_hat, chi);
                const std::size_t best = arg_max(q);
                row.q.push_back(std::clamp(q[best], 0.0, c2));
                row.centers.push_back(g.node(best));
            }
            return row;
        }));
    }
    std::vector<QRow> rows;
    for (auto& f : futures) rows.push_back(f.get());

    CCClassification out;
    out.epsilon = eps_min;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n_r; ++i)
            out.q_table.push_back({k, r_ladder[i], rows[k].q[i]});

    const int trail = n / 2;  // trends are read off indices trail..n-1
    std::ostringstream why;

    // Compactness: every ladder epsilon admits a capture radius <= L/4 that
    // works for the whole trailing half.
    {
        std::vector<double> r_of_eps;
        for (double eps : eps_ladder) {
            int found = -1;
            for (int i = 0; i < n_r && found < 0; ++i) {
                if (r_ladder[i] > L / 4.0) break;
                bool all = true;
                for (int k = trail; k < n && all; ++k) all = rows[k].q[i] >= c2 - eps;
                if (all) found = i;
            }
            if (found < 0) {
                why << "compactness: no radius <= L/4 captures c2 - " << eps << "; ";
                r_of_eps.clear();
                break;
            }
            r_of_eps.push_back(r_ladder[found]);
        }
        if (!r_of_eps.empty()) {
            out.verdict = CCVerdict::compactness;
            out.radii = r_of_eps;
            const int i_min =
                static_cast<int>(std::lower_bound(r_ladder.begin(), r_ladder.end(),
                                                  r_of_eps.back()) -
                                 r_ladder.begin());
            for (int k = trail; k < n; ++k) out.centers.push_back(rows[k].centers[i_min]);
            return out;
        }
    }

    // Vanishing: at every ladder radius the excess over the uniform baseline
    // is nonincreasing across the trailing half and ends below eps_min.
    {
        bool ok = true;
        const double slack = 1e-9 * c2;
        for (int i = 0; i < n_r && ok; ++i) {
            double prev = rows[trail].q[i] - c2 * volfrac[i];
            for (int k = trail + 1; k < n; ++k) {
                const double e = rows[k].q[i] - c2 * volfrac[i];
                if (e > prev + slack) {
                    ok = false;
                    why << "vanishing: excess grew at R = " << r_ladder[i] << "; ";
                    break;
                }
                prev = e;
            }
            if (ok && prev > eps_min) {
                ok = false;
                why << "vanishing: final excess " << prev << " at R = " << r_ladder[i]
                    << " above " << eps_min << "; ";
            }
        }
        if (ok) {
            out.verdict = CCVerdict::vanishing;
            for (int k = trail; k < n; ++k)
                out.centers.push_back(rows[k].centers[n_r - 1]);
            return out;
        }
    }

    // Dichotomy: each trailing field shows a plateau of Q(.) at a common
    // level strictly between eps_min and c2 - eps_min.
    {
        std::vector<std::pair<int, int>> runs(n);
        std::vector<double> levels;
        bool ok = true;
        for (int k = trail; k < n && ok; ++k) {
            runs[k] = longest_plateau(rows[k].q, eps_min);
            if (runs[k].second < 0) {
                ok = false;
                why << "dichotomy: no plateau for field " << k << "; ";
                break;
            }
            double level = 0.0;
            for (int i = runs[k].first; i <= runs[k].second; ++i) level += rows[k].q[i];
            level /= runs[k].second - runs[k].first + 1;
            if (!(level > eps_min && level < c2 - eps_min)) {
                ok = false;
                why << "dichotomy: plateau level " << level << " not interior; ";
                break;
            }
            levels.push_back(level);
        }
        if (ok) {
            const double a2 =
                std::accumulate(levels.begin(), levels.end(), 0.0) / levels.size();
            for (double m : levels)
                if (std::fabs(m - a2) > eps_min) {
                    ok = false;
                    why << "dichotomy: plateau levels disagree beyond " << eps_min << "; ";
                    break;
                }
            if (ok) {
                const auto [lo, hi] = runs[n - 1];
                // Cutoff radii from the last field's plateau: the outer ramp
                // must end inside the plateau so w captures the far mass.
                int i_rn = -1;
                for (int i = hi; i >= lo; --i)
                    if (2.0 * r_ladder[i] <= std::min(r_ladder[hi], 0.5 * L)) {
                        i_rn = i;
                        break;
                    }
                int i_r0 = -1;
                if (i_rn >= 0 && 2.0 * r_ladder[lo] < r_ladder[i_rn]) i_r0 = lo;
                if (i_r0 < 0)
                    throw Inconclusive(
                        "dichotomy plateau too narrow to place disjoint cutoffs (plateau [" +
                        std::to_string(r_ladder[lo]) + ", " + std::to_string(r_ladder[hi]) +
                        "])");
                const double R0 = r_ladder[i_r0];
                const double Rn = r_ladder[i_rn];
                const Point y = rows[n - 1].centers[lo];
                auto [v, w] = split_sequence(seq.fields[n - 1], y, R0, Rn);
                out.verdict = CCVerdict::dichotomy;
                out.a2 = a2;
                out.radii = {R0, Rn};
                out.mass_inner = mass(v);
                out.mass_outer = mass(w);
                out.surplus =
                    frac_kinetic(seq.fields[n - 1]) - frac_kinetic(v) - frac_kinetic(w);
                for (int k = trail; k < n; ++k)
                    out.centers.push_back(rows[k].centers[runs[k].first]);
                return out;
            }
        }
    }

    throw Inconclusive("no alternative stabilized over the trailing half: " + why.str());
}

nlohmann::json CCClassification::to_json() const {
    nlohmann::json centers_json = nlohmann::json::array();
    for (const Point& y : centers) centers_json.push_back({y[0], y[1]});
    nlohmann::json table = nlohmann::json::array();
    for (const QSample& s : q_table) table.push_back({{"n", s.n}, {"R", s.R}, {"Q", s.Q}});
    nlohmann::json j{{"verdict", cc_verdict_name(verdict)},
                     {"centers", centers_json},
                     {"radii", radii},
                     {"surplus", surplus},
                     {"epsilon", epsilon},
                     {"q_table", table}};
    if (a2) {
        j["a2"] = *a2;
        j["mass_inner"] = mass_inner;
        j["mass_outer"] = mass_outer;
    }
    return j;
}

std::string CCClassification::q_table_csv() const {
    std::string out = "n,R,Q\n";
    char line[96];
    for (const QSample& s : q_table) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", s.n, s.R, s.Q);
        out += line;
    }
    return out;
}

Field recenter(const Field& u, const Point& y) {
    Point shift{std::floor(y[0]), 0.0};
    if (u.grid().dim() == 2) shift[1] = std::floor(y[1]);
    return spectral_translate(u, shift);
}

std::string synthetic_kind_name(SyntheticKind k) {
    switch (k) {
        case SyntheticKind::spreading: return "spreading";
        case SyntheticKind::translating: return "translating";
        case SyntheticKind::separating: return "separating";
    }
    return "unknown";
}

namespace {

Field gaussian_bump(const Grid& g, const Point& center, double width, double amp) {
    return Field::sample(g, [&](const Point& x) {
        const double d = g.torus_distance(x, center);
        return amp * std::exp(-(d * d) / (width * width));
    });
}

}  // namespace

FieldSequence synthetic_sequence(SyntheticKind kind, const Grid& grid, int count,
                                 double c2, std::uint64_t seed) {
    if (count < 4) throw ConfigError("synthetic sequences need at least four fields");
    if (!(c2 > 0.0)) throw ConfigError("synthetic sequences need positive mass");
    std::seed_seq sseq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(kind)};
    std::mt19937_64 rng(sseq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double L = grid.box_length();

    std::vector<Field> fields;
    switch (kind) {
        case SyntheticKind::spreading: {
            // A bump that widens while its amplitude collapses geometrically
            // on a unit pedestal: the periodic realization of mass spreading
            // uniformly over the box.
            const double w0 = 0.8 + 0.4 * unit(rng);
            const double a0 = 0.6 + 0.3 * unit(rng);
            Point x0{L * (unit(rng) - 0.5) / 4.0, 0.0};
            if (grid.dim() == 2) x0[1] = L * (unit(rng) - 0.5) / 4.0;
            const Field pedestal = Field::sample(grid, [](const Point&) { return 1.0; });
            for (int k = 0; k < count; ++k) {
                const Field b =
                    gaussian_bump(grid, x0, w0 * (k + 1), a0 * std::pow(3.0, -k));
                fields.push_back(normalize_mass(add(pedestal, b), c2));
            }
            break;
        }
        case SyntheticKind::translating: {
            const double w = 0.8 + 0.4 * unit(rng);
            const double drift = L / 17.0 + (L / 9.0 - L / 17.0) * unit(rng);
            const double x0 = L * (unit(rng) - 0.5) / 2.0;
            const double y0 = grid.dim() == 2 ? L * (unit(rng) - 0.5) / 2.0 : 0.0;
            for (int k = 0; k < count; ++k) {
                const Point c{std::remainder(x0 + k * drift, L), y0};
                fields.push_back(normalize_mass(gaussian_bump(grid, c, w, 1.0), c2));
            }
            break;
        }
        case SyntheticKind::separating: {
            // Heavy and light bumps marching apart along the first axis; the
            // final separation exceeds L/4 so no quarter-box ball recaptures
            // both.
            const double w = 1.0 + 0.4 * unit(rng);
            const double rho = 0.55 + 0.10 * unit(rng);  // heavy mass fraction
            const double o = L * (unit(rng) - 0.5) / 20.0;
            const double x_min = L / 13.0;
            const double x_max = 0.3 * L;
            for (int k = 0; k < count; ++k) {
                const double x = x_min + (x_max - x_min) * k / (count - 1);
                const Field heavy =
                    gaussian_bump(grid, {o - x, 0.0}, w, std::sqrt(rho));
                const Field light =
                    gaussian_bump(grid, {o + x, 0.0}, w, std::sqrt(1.0 - rho));
                fields.push_back(normalize_mass(add(heavy, light), c2));
            }
            break;
        }
    }
    return field_sequence(std::move(fields));
}

}  // namespace fracmin
