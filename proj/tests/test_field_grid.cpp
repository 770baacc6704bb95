#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "fracmin/errors.hpp"
#include "fracmin/field.hpp"
#include "fracmin/field_io.hpp"
#include "fracmin/gagliardo.hpp"
#include "fracmin/grid.hpp"
#include "fracmin/profiles.hpp"
#include "fracmin/spectral.hpp"

using namespace fracmin;

namespace {

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> vals(g.total_points());
    for (auto& v : vals) v = dist(rng);
    return Field(g, std::move(vals));
}

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace

TEST_CASE("grid construction validates its invariants") {
    CHECK_NOTHROW(Grid(1, 40.0, 512, 0.5));
    CHECK_NOTHROW(Grid(2, 20.0, 64, 0.25));
    // the kinetic operator is well defined for every s in (0,1), including
    // s > N/2 configurations such as s = 0.75 in one dimension
    CHECK_NOTHROW(Grid(1, 40.0, 512, 0.75));
    CHECK_THROWS_AS(Grid(3, 40.0, 512, 0.5), DimensionUnsupported);
    CHECK_THROWS_AS(Grid(1, -1.0, 512, 0.5), ConfigError);
    CHECK_THROWS_AS(Grid(1, 40.0, 511, 0.5), ConfigError);  // odd M
    CHECK_THROWS_AS(Grid(1, 40.0, 0, 0.5), ConfigError);
    CHECK_THROWS_AS(Grid(1, 40.0, 512, 0.0), ConfigError);
    CHECK_THROWS_AS(Grid(1, 40.0, 512, 1.0), ConfigError);
}

TEST_CASE("grid geometry: nodes, frequencies, torus metric") {
    Grid g(1, 40.0, 8, 0.5);
    CHECK(g.spacing() == doctest::Approx(5.0));
    CHECK(g.coord(0) == doctest::Approx(-20.0));
    CHECK(g.coord(4) == doctest::Approx(0.0));
    CHECK(g.freq(0) == 0.0);
    CHECK(g.freq(1) == doctest::Approx(2.0 * M_PI / 40.0));
    CHECK(g.freq(4) == doctest::Approx(-4.0 * 2.0 * M_PI / 40.0));  // wrapped half
    CHECK(g.freq(7) == doctest::Approx(-2.0 * M_PI / 40.0));
    CHECK(g.torus_distance({-19.0, 0.0}, {19.0, 0.0}) == doctest::Approx(2.0));

    Grid g2(2, 20.0, 4, 0.5);
    CHECK(g2.total_points() == 16);
    CHECK(g2.cell_volume() == doctest::Approx(25.0));
    Point p = g2.node(5);  // flat 5 = (x index 1, y index 1)
    CHECK(p[0] == doctest::Approx(-5.0));
    CHECK(p[1] == doctest::Approx(-5.0));
}

TEST_CASE("dft: constant field concentrates at the zero mode") {
    Grid g(1, 40.0, 64, 0.5);
    Field u(g, std::vector<double>(64, 3.0));
    auto coeffs = dft_forward(u);
    const double total = mass(u);
    CHECK(std::norm(coeffs[0]) == doctest::Approx(total).epsilon(1e-12));
    for (std::size_t k = 1; k < coeffs.size(); ++k) CHECK(std::abs(coeffs[k]) < 1e-12);
}

TEST_CASE("dft: single cosine occupies modes +-1") {
    Grid g(1, 40.0, 64, 0.5);
    Field u = Field::sample(g, [&](const Point& x) { return std::cos(2.0 * M_PI * x[0] / 40.0); });
    auto coeffs = dft_forward(u);
    double off_mode = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (k != 1 && k != 63) off_mode += std::norm(coeffs[k]);
    CHECK(off_mode < 1e-20);
    CHECK(std::norm(coeffs[1]) == doctest::Approx(mass(u) / 2.0).epsilon(1e-12));
}

TEST_CASE("dft: Parseval identity and round trip on random fields") {
    for (int dim : {1, 2}) {
        Grid g(dim, 40.0, dim == 1 ? 128 : 32, 0.5);
        Field u = random_field(g, 42);
        auto coeffs = dft_forward(u);
        double spectral_mass = 0.0;
        for (const auto& c : coeffs) spectral_mass += std::norm(c);
        CHECK(rel_err(spectral_mass, mass(u)) < 1e-12);

        Field back = dft_inverse(g, coeffs);
        double worst = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
            worst = std::max(worst, std::fabs(back[j] - u[j]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("frac_kinetic: constants are the kernel") {
    Grid g(1, 40.0, 64, 0.3);
    Field u(g, std::vector<double>(64, 1.0));
    CHECK(frac_kinetic(u) == 0.0);
}

TEST_CASE("frac_kinetic: unit-frequency cosine gives pi for every s") {
    // On L = 2*pi the mode cos(x) has |xi| = 1, so the multiplier is 1 for
    // all s and the kinetic energy equals the mass L/2 = pi.
    for (double s : {0.25, 0.5, 0.75}) {
        Grid g(1, 2.0 * M_PI, 128, s);
        Field u = Field::sample(g, [](const Point& x) { return std::cos(x[0]); });
        CHECK(rel_err(frac_kinetic(u), M_PI) < 1e-12);
    }
}

TEST_CASE("frac_kinetic: exact quadratic homogeneity") {
    Grid g(1, 40.0, 128, 0.5);
    Field u = random_field(g, 7);
    const double base = frac_kinetic(u);
    CHECK(rel_err(frac_kinetic(scale(3.5, u)), 3.5 * 3.5 * base) < 1e-13);
}

TEST_CASE("frac_laplacian_apply: kernel, eigenfunctions, quadratic form") {
    Grid g(1, 40.0, 128, 0.6);
    SUBCASE("constants map to zero") {
        Field u(g, std::vector<double>(128, 2.5));
        Field au = frac_laplacian_apply(u);
        for (std::size_t j = 0; j < au.size(); ++j) CHECK(std::fabs(au[j]) < 1e-12);
    }
    SUBCASE("cosine modes are eigenfunctions with eigenvalue |xi_k|^{2s}") {
        for (int k : {1, 3, 7}) {
            Field u = Field::sample(
                g, [&](const Point& x) { return std::cos(2.0 * M_PI * k * x[0] / 40.0); });
            Field au = frac_laplacian_apply(u);
            const double eig = std::pow(2.0 * M_PI * k / 40.0, 2.0 * g.s());
            double worst = 0.0;
            for (std::size_t j = 0; j < u.size(); ++j)
                worst = std::max(worst, std::fabs(au[j] - eig * u[j]));
            CHECK(worst < 1e-10 * eig);
        }
    }
    SUBCASE("quadratic form reproduces frac_kinetic; operator is self-adjoint") {
        Field u = random_field(g, 1);
        Field v = random_field(g, 2);
        CHECK(rel_err(inner(frac_laplacian_apply(u), u), frac_kinetic(u)) < 1e-12);
        CHECK(rel_err(inner(frac_laplacian_apply(u), v), inner(u, frac_laplacian_apply(v))) <
              1e-10);
    }
}

TEST_CASE("norm bundle ties mass, kinetic and hs_norm together") {
    Grid g(1, 40.0, 128, 0.5);
    Field u = random_field(g, 11);
    NormBundle b = compute_norms(u, {2.0, 4.0});
    CHECK(b.mass >= 0.0);
    CHECK(b.kinetic >= 0.0);
    CHECK(rel_err(b.hs_norm * b.hs_norm, b.mass + b.kinetic) < 1e-12);
    CHECK(rel_err(b.lp_norms.at(2.0), l2_norm(u)) < 1e-12);
    CHECK(b.lp_norms.at(4.0) > 0.0);
}

TEST_CASE("gagliardo constant anchors") {
    CHECK(rel_err(gagliardo_constant(1, 0.5), 1.0 / M_PI) < 1e-14);
    CHECK_THROWS_AS(gagliardo_constant(3, 0.5), DimensionUnsupported);
}

TEST_CASE("gagliardo_kinetic_1d: zero field, spike, homogeneity, dimension gate") {
    Grid g(1, 40.0, 256, 0.5);
    CHECK(gagliardo_kinetic_1d(Field::zeros(g)) == 0.0);

    std::vector<double> spike(256, 0.0);
    spike[100] = 2.0;
    Field sp(g, spike);
    const double val = gagliardo_kinetic_1d(sp);
    CHECK(val > 0.0);
    CHECK(std::isfinite(val));
    std::vector<double> spike3(256, 0.0);
    spike3[100] = 6.0;  // 3x amplitude => exactly 9x the seminorm
    CHECK(rel_err(gagliardo_kinetic_1d(Field(g, spike3)), 9.0 * val) < 1e-13);

    Grid g2(2, 20.0, 16, 0.5);
    CHECK_THROWS_AS(gagliardo_kinetic_1d(Field::zeros(g2)), DimensionUnsupported);
}

TEST_CASE("gagliardo_kinetic_1d cross-validates frac_kinetic on smooth fields") {
    // The full three-exponent sweep with grid refinement runs in the
    // acceptance suite; this is the s = 0.5 smoke version.
    Grid g(1, 40.0, 512, 0.5);
    Field u = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]); });
    CHECK(rel_err(gagliardo_kinetic_1d(u), frac_kinetic(u)) < 1e-3);
}

TEST_CASE("normalize_mass rescales onto the sphere") {
    Grid g(1, 40.0, 128, 0.5);
    Field u = random_field(g, 3);

    Field same = normalize_mass(normalize_mass(u, 4.0), 4.0);  // idempotent on the sphere
    CHECK(rel_err(mass(same), 4.0) < 1e-12);

    Field w = normalize_mass(u, 9.0 * mass(u));  // scale by 3, direction kept
    for (std::size_t j = 0; j < u.size(); ++j)
        CHECK(w[j] == doctest::Approx(3.0 * u[j]).epsilon(1e-12));

    CHECK(rel_err(mass(normalize_mass(u, 2.7)), 2.7) < 1e-12);
    CHECK_THROWS_AS(normalize_mass(Field::zeros(g), 1.0), ZeroField);
}

TEST_CASE("dilate: identity, mass invariance, kinetic scaling law") {
    Grid g(1, 40.0, 512, 0.5);
    Profile phi = gaussian_profile();

    Field plain = dilate(phi, 1.0, g);
    Field sampled = Field::sample(g, [&](const Point& x) { return phi.radial(std::fabs(x[0])); });
    for (std::size_t j = 0; j < plain.size(); ++j) CHECK(plain[j] == sampled[j]);

    const double m1 = mass(plain);
    for (double lambda : {0.25, 0.5, 2.0}) {
        Field ul = dilate(phi, lambda, g);
        CHECK(rel_err(mass(ul), m1) < 1e-3);
    }

    // The kinetic scaling law kinetic(phi_lambda) = lambda^{2s} kinetic(phi) is a
    // whole-line identity; on the torus the |xi|^{2s} kink at xi = 0 leaves a
    // residual of order (2pi/L)^2 |u_hat(0)|^2, so verifying it at 1e-3 needs a
    // wide box.  L = 160 keeps the worst ratio error below 4e-4 here.
    Grid wide(1, 160.0, 2048, 0.5);
    Field base = dilate(phi, 1.0, wide);
    const double kw = frac_kinetic(base);
    for (double lambda : {0.5, 2.0}) {
        Field ul = dilate(phi, lambda, wide);
        CHECK(rel_err(mass(ul), mass(base)) < 1e-3);
        CHECK(rel_err(frac_kinetic(ul), std::pow(lambda, 2.0 * wide.s()) * kw) < 1e-3);
    }

    CHECK_THROWS_AS(dilate(phi, 0.01, g), ProfileOverflow);  // support 300 > L/2
    CHECK_THROWS_AS(dilate(rational_bump_profile(), 1.0, g), ProfileOverflow);  // 28 > 20
    CHECK_NOTHROW(dilate(rational_bump_profile(), 1.0, Grid(1, 80.0, 512, 0.5)));
}

TEST_CASE("spectral_translate preserves mass and kinetic, shifts samples") {
    Grid g(1, 40.0, 128, 0.5);
    Field u = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0] / 4.0); });
    Field t = spectral_translate(u, {g.spacing() * 5.0, 0.0});
    CHECK(rel_err(mass(t), mass(u)) < 1e-12);
    CHECK(rel_err(frac_kinetic(t), frac_kinetic(u)) < 1e-12);
    // a shift by exactly five cells permutes the sample vector
    for (std::size_t j = 0; j < u.size(); ++j)
        CHECK(t[j] == doctest::Approx(u[(j + 5) % u.size()]).epsilon(1e-10));
}

TEST_CASE("2-D spectral operators agree with closed forms") {
    Grid g(2, 20.0, 32, 0.5);
    Field u = Field::sample(g, [](const Point& x) {
        return std::cos(2.0 * M_PI * x[0] / 20.0) * std::cos(2.0 * M_PI * 2.0 * x[1] / 20.0);
    });
    // product of modes (1,2): |xi|^2 = (2pi/L)^2 * (1 + 4), mass = L^2/4
    const double xi2 = std::pow(2.0 * M_PI / 20.0, 2) * 5.0;
    const double expected = std::pow(xi2, 0.5) * mass(u);
    CHECK(rel_err(frac_kinetic(u), expected) < 1e-12);

    Field au = frac_laplacian_apply(u);
    double worst = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        worst = std::max(worst, std::fabs(au[j] - std::pow(xi2, 0.5) * u[j]));
    CHECK(worst < 1e-10);
}

TEST_CASE("hminus_norm: multiplier bounds and single-mode formula") {
    Grid g(1, 40.0, 128, 0.5);
    Field c(g, std::vector<double>(128, 1.7));
    CHECK(rel_err(hminus_norm(c), l2_norm(c)) < 1e-12);  // zero mode multiplier is 1

    const int k = 6;
    Field u = Field::sample(g, [&](const Point& x) { return std::cos(2.0 * M_PI * k * x[0] / 40.0); });
    const double xi = 2.0 * M_PI * k / 40.0;
    CHECK(rel_err(hminus_norm(u), l2_norm(u) / std::sqrt(1.0 + xi)) < 1e-12);

    Field r = random_field(g, 9);
    CHECK(hminus_norm(r) <= l2_norm(r) * (1.0 + 1e-12));
}

TEST_CASE("field binary serialization round-trips bit-exactly") {
    Grid g(1, 40.0, 64, 0.35);
    Field u = random_field(g, 99);
    const std::string path = "roundtrip_test.field";
    write_field_binary(u, path);
    Field back = read_field_binary(path);
    CHECK(back.grid() == u.grid());
    for (std::size_t j = 0; j < u.size(); ++j) CHECK(back[j] == u[j]);  // bitwise
    std::remove(path.c_str());

    write_field_csv(u, "roundtrip_test.csv");
    std::remove("roundtrip_test.csv");
}

TEST_CASE("field construction rejects wrong sizes and non-finite values") {
    Grid g(1, 40.0, 64, 0.5);
    CHECK_THROWS_AS(Field(g, std::vector<double>(63, 0.0)), ConfigError);
    std::vector<double> bad(64, 0.0);
    bad[10] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Field(g, bad), ConfigError);
}
