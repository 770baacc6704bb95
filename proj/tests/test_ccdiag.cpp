#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracmin/ccdiag.hpp"
#include "fracmin/errors.hpp"
#include "fracmin/flow.hpp"
#include "fracmin/spectral.hpp"

using namespace fracmin;

namespace {

Field bump(const Grid& g, const Point& center, double width, double amp) {
    return Field::sample(g, [&](const Point& x) {
        const double d = g.torus_distance(x, center);
        return amp * std::exp(-(d * d) / (width * width));
    });
}

// Mass fractions rho and 1 - rho placed at opposite quarter-box points.
Field bump_pair(const Grid& g, double rho, double separation_half) {
    return normalize_mass(add(bump(g, {-separation_half, 0.0}, 1.0, std::sqrt(rho)),
                              bump(g, {separation_half, 0.0}, 1.0, std::sqrt(1.0 - rho))),
                          1.0);
}

}  // namespace

TEST_CASE("concentration function matches a direct ball sum") {
    Grid g(1, 20.0, 64, 0.5);
    Field u = Field::sample(g, [&](const Point& x) {
        return std::exp(-x[0] * x[0]) + 0.4 * std::exp(-0.5 * (x[0] - 6.0) * (x[0] - 6.0));
    });
    const double R = 3.7;

    double best_q = -1.0;
    Point best_y{};
    for (std::size_t c = 0; c < u.size(); ++c) {
        const Point y = g.node(c);
        double q = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
            if (g.torus_distance(g.node(j), y) <= R) q += u[j] * u[j];
        q *= g.cell_volume();
        if (q > best_q) {
            best_q = q;
            best_y = y;
        }
    }

    Concentration got = concentration_function(u, R);
    CHECK(std::fabs(got.Q - best_q) < 1e-10 * best_q);
    CHECK(got.center[0] == best_y[0]);
}

TEST_CASE("uniform fields concentrate exactly at the discrete ball volume") {
    Grid g(1, 20.0, 64, 0.5);
    Field u(g, std::vector<double>(64, 0.3));
    const double m = mass(u);

    for (double R : {0.7, 2.5, 6.0}) {
        int count = 0;
        for (std::size_t j = 0; j < u.size(); ++j)
            if (g.torus_distance(g.node(j), g.node(0)) <= R) ++count;
        const double expected = m * count / 64.0;
        CHECK(concentration_function(u, R).Q == doctest::Approx(expected).epsilon(1e-12));
    }

    // monotone in R, saturating at the full mass once the ball covers the box
    double prev = 0.0;
    for (double R : {1.0, 2.5, 5.0, 10.0}) {
        const double q = concentration_function(u, R).Q;
        CHECK(q >= prev - 1e-14);
        prev = q;
    }
    CHECK(concentration_function(u, 10.0).Q == doctest::Approx(m).epsilon(1e-12));

    CHECK_THROWS_AS(concentration_function(u, 0.0), ConfigError);
    CHECK_THROWS_AS(concentration_function(u, 10.0001), RadiusTooLarge);
}

TEST_CASE("concentration centers track localized bumps") {
    Grid g(1, 40.0, 256, 0.5);
    const double h = g.spacing();

    Field solo = bump(g, {7.3, 0.0}, 1.0, 1.0);
    CHECK(std::fabs(concentration_function(solo, 2.0).center[0] - 7.3) <= h);

    Field pair = bump_pair(g, 0.7, 10.0);
    Concentration heavy = concentration_function(pair, 4.0);
    CHECK(std::fabs(heavy.center[0] + 10.0) <= h);
    CHECK(heavy.Q == doctest::Approx(0.7).epsilon(0.03));
    CHECK(concentration_function(pair, 20.0).Q == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("splitting is exact on the designated regions") {
    Grid g(1, 40.0, 256, 0.5);
    Field u = bump_pair(g, 0.6, 10.0);
    const Point y{-10.0, 0.0};
    const double R0 = 1.5, Rn = 4.0;
    auto [v, w] = split_sequence(u, y, R0, Rn);

    for (std::size_t j = 0; j < u.size(); ++j) {
        const double r = g.torus_distance(g.node(j), y);
        if (r <= R0) CHECK(v[j] == u[j]);
        if (r >= 2.0 * R0) CHECK(v[j] == 0.0);
        if (r <= Rn) CHECK(w[j] == 0.0);
        if (r >= 2.0 * Rn) CHECK(w[j] == u[j]);
        CHECK(std::fabs(v[j]) <= std::fabs(u[j]) * (1.0 + 1e-12));
        CHECK(std::fabs(w[j]) <= std::fabs(u[j]) * (1.0 + 1e-12));
        CHECK(v[j] * w[j] == 0.0);  // supports stay disjoint
    }
    CHECK(mass(v) + mass(w) <= mass(u) * (1.0 + 1e-12));
    CHECK(mass(v) == doctest::Approx(0.6).epsilon(0.02));
    CHECK(mass(w) == doctest::Approx(0.4).epsilon(0.02));

    CHECK_THROWS_WITH_AS(split_sequence(u, y, 0.0, 4.0), doctest::Contains("cutoff radii"),
                         RadiusOrder);
    CHECK_THROWS_AS(split_sequence(u, y, 2.0, 4.0), RadiusOrder);   // 2*R0 = Rn
    CHECK_THROWS_AS(split_sequence(u, y, 2.0, 10.5), RadiusOrder);  // 2*Rn > L/2
}

TEST_CASE("field sequences validate grids and mass agreement") {
    Grid g(1, 20.0, 64, 0.5);
    Field a = bump(g, {0.0, 0.0}, 1.0, 1.0);
    Field b = bump(g, {3.0, 0.0}, 1.0, 1.0);

    FieldSequence seq = field_sequence({a, b});
    CHECK(seq.c2 == doctest::Approx(mass(a)).epsilon(1e-14));
    CHECK(seq.fields.size() == 2);

    CHECK_THROWS_AS(field_sequence({}), ConfigError);
    CHECK_THROWS_AS(field_sequence({Field(g, std::vector<double>(64, 0.0))}), ZeroField);
    Field other(Grid(1, 20.0, 128, 0.5), std::vector<double>(128, 1.0));
    CHECK_THROWS_AS(field_sequence({a, other}), ConfigError);
    CHECK_THROWS_WITH_AS(field_sequence({a, scale(1.01, a)}),
                         doctest::Contains("relative 1e-8"), ConfigError);
}

TEST_CASE("classification inputs are validated") {
    Grid g(1, 20.0, 64, 0.5);
    std::vector<Field> fields;
    for (int k = 0; k < 4; ++k) fields.push_back(bump(g, {0.5 * k, 0.0}, 1.0, 1.0));
    FieldSequence seq = field_sequence(std::move(fields));

    FieldSequence three = field_sequence(
        {seq.fields[0], seq.fields[1], seq.fields[2]});
    CHECK_THROWS_WITH_AS(classify(three, {0.1}), doctest::Contains("at least four"),
                         ConfigError);
    CHECK_THROWS_AS(classify(seq, {}), ConfigError);
    CHECK_THROWS_AS(classify(seq, {0.1, -0.2}), ConfigError);
    CHECK_THROWS_AS(classify(seq, {0.1, 0.1}), ConfigError);
    CHECK_THROWS_WITH_AS(classify(seq, {0.1}, {5.0, 2.0}), doctest::Contains("ascending"),
                         ConfigError);
    CHECK_THROWS_AS(classify(seq, {0.1}, {2.0, 11.0}), RadiusTooLarge);
}

TEST_CASE("synthetic families land on their designed verdicts") {
    Grid g(1, 40.0, 256, 0.5);
    const std::vector<double> eps{0.2, 0.1, 0.05};

    for (std::uint64_t seed : {0ull, 3ull}) {
        CCClassification vanish =
            classify(synthetic_sequence(SyntheticKind::spreading, g, 8, 1.0, seed), eps);
        CHECK(vanish.verdict == CCVerdict::vanishing);
        CHECK(vanish.centers.size() == 4);
        CHECK(vanish.epsilon == 0.05);
        CHECK(vanish.q_table.size() == 8 * 12);

        CCClassification compact =
            classify(synthetic_sequence(SyntheticKind::translating, g, 8, 1.0, seed), eps);
        CHECK(compact.verdict == CCVerdict::compactness);
        REQUIRE(compact.radii.size() == 3);
        for (std::size_t i = 1; i < 3; ++i) CHECK(compact.radii[i] >= compact.radii[i - 1]);
        CHECK(compact.radii.back() <= 10.0);
        // the tracked centers drift rigidly: consecutive steps agree within
        // the lattice resolution and sit inside the seeded drift envelope
        REQUIRE(compact.centers.size() == 4);
        const double h = g.spacing();
        const double d0 = std::remainder(compact.centers[1][0] - compact.centers[0][0], 40.0);
        for (std::size_t j = 1; j + 1 < 4; ++j) {
            const double dj =
                std::remainder(compact.centers[j + 1][0] - compact.centers[j][0], 40.0);
            CHECK(std::fabs(dj - d0) <= 2.0 * h);
        }
        CHECK(std::fabs(d0) >= 40.0 / 17.0 - 2.0 * h);
        CHECK(std::fabs(d0) <= 40.0 / 9.0 + 2.0 * h);

        CCClassification dich =
            classify(synthetic_sequence(SyntheticKind::separating, g, 8, 1.0, seed), eps);
        CHECK(dich.verdict == CCVerdict::dichotomy);
        REQUIRE(dich.a2.has_value());
        CHECK(*dich.a2 > 0.5);
        CHECK(*dich.a2 < 0.7);
        CHECK(std::fabs(dich.mass_inner - *dich.a2) < 0.02);
        CHECK(dich.mass_inner + dich.mass_outer <= 1.0 + 1e-9);
        CHECK(dich.mass_outer > 0.3);
        CHECK(std::fabs(dich.surplus) < 0.05);
        REQUIRE(dich.radii.size() == 2);
        CHECK(2.0 * dich.radii[0] < dich.radii[1]);
        CHECK(2.0 * dich.radii[1] <= 20.0);
    }

    // bitwise determinism of generation and classification
    FieldSequence s1 = synthetic_sequence(SyntheticKind::separating, g, 8, 1.0, 3);
    FieldSequence s2 = synthetic_sequence(SyntheticKind::separating, g, 8, 1.0, 3);
    for (std::size_t k = 0; k < s1.fields.size(); ++k)
        for (std::size_t j = 0; j < s1.fields[k].size(); ++j)
            REQUIRE(s1.fields[k][j] == s2.fields[k][j]);
    CHECK(classify(s1, eps).to_json().dump() == classify(s2, eps).to_json().dump());

    const std::string csv = classify(s1, eps).q_table_csv();
    CHECK(csv.rfind("n,R,Q\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8 * 12 + 1);

    CHECK_THROWS_AS(synthetic_sequence(SyntheticKind::spreading, g, 3, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(synthetic_sequence(SyntheticKind::spreading, g, 8, 0.0, 0), ConfigError);
}

TEST_CASE("two dimensions: spreading and translating classify; a cramped box refuses") {
    Grid g(2, 20.0, 64, 0.5);
    const std::vector<double> eps{0.2, 0.1, 0.05};
    CHECK(classify(synthetic_sequence(SyntheticKind::spreading, g, 6, 1.0, 1), eps).verdict ==
          CCVerdict::vanishing);
    CHECK(classify(synthetic_sequence(SyntheticKind::translating, g, 6, 1.0, 1), eps)
              .verdict == CCVerdict::compactness);
    // the separating pair needs a plateau spanning more than a factor four in
    // radius to place disjoint cutoffs; a 20-box cannot host one
    CHECK_THROWS_WITH_AS(
        classify(synthetic_sequence(SyntheticKind::separating, g, 6, 1.0, 1), eps),
        doctest::Contains("too narrow"), Inconclusive);
}

TEST_CASE("alternating plateau levels stay inconclusive") {
    Grid g(1, 40.0, 256, 0.5);
    std::vector<Field> fields;
    for (int k = 0; k < 8; ++k) fields.push_back(bump_pair(g, k % 2 ? 0.75 : 0.5, 10.0));
    CHECK_THROWS_WITH_AS(classify(field_sequence(std::move(fields)), {0.2, 0.1, 0.05}),
                         doctest::Contains("plateau levels disagree"), Inconclusive);
}

TEST_CASE("recentering brings a feature home without touching the invariants") {
    Grid g(1, 40.0, 256, 0.5);
    Field u = bump(g, {7.3, 0.0}, 1.0, 1.0);
    Field r = recenter(u, {7.3, 0.0});
    CHECK(mass(r) == doctest::Approx(mass(u)).epsilon(1e-13));
    CHECK(frac_kinetic(r) == doctest::Approx(frac_kinetic(u)).epsilon(1e-12));
    CHECK(std::fabs(concentration_function(r, 2.0).center[0] - 0.3) <= g.spacing());
}

TEST_CASE("snapshots of a minimizing flow form a compact sequence") {
    Grid g(1, 80.0, 512, 0.5);
    NonlinearitySpec pp = pure_power_spec(1.0);
    std::vector<Field> snaps;
    for (int iters : {100, 200, 400, 800, 1600, 3200}) {
        FlowConfig cfg;
        cfg.c2 = 2.0 * M_PI;
        cfg.el_tol = 1e-14;  // unattainable: every budget is exhausted
        cfg.max_iters = iters;
        cfg.seed = 7;
        MinimizerResult res = minimize(pp, g, cfg);
        CHECK_FALSE(res.converged);
        CHECK(mass(res.u_star) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
        snaps.push_back(res.u_star);
    }
    CCClassification c = classify(field_sequence(std::move(snaps)), {0.6, 0.3});
    CHECK(c.verdict == CCVerdict::compactness);
    REQUIRE(c.radii.size() == 2);
    for (double R : c.radii) CHECK(R <= 20.0);
    CHECK(c.centers.size() == 3);
    CHECK(c.epsilon == 0.3);
}
