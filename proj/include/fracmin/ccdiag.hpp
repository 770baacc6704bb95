#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracmin/field.hpp"
#include "fracmin/profiles.hpp"

namespace fracmin {

// --- concentration function ----------------------------------------------------

struct Concentration {
    double Q = 0.0;    // largest mass captured by a radius-R periodic ball
    Point center{};    // maximizing center (ties resolved to the smallest
                       // flat node index)
};

// Q(R) = max over grid centers y of the nodal mass of u inside the periodic
// ball B(y, R), computed by FFT cross-correlation of u^2 with the ball
// indicator.  Requires 0 < R (ConfigError) and R <= L/2 (RadiusTooLarge).
Concentration concentration_function(const Field& u, double R);

// --- dichotomy splitting ---------------------------------------------------------

// Inner/outer parts of u around center y: v agrees with u on the ball of
// radius R0 and vanishes beyond 2*R0; w vanishes inside Rn and agrees with u
// beyond 2*Rn.  C^1 polynomial ramps interpolate on the annuli, so
// |v| <= |u|, |w| <= |u| pointwise and the supports stay a distance
// Rn - 2*R0 apart.  Requires 0 < 2*R0 < Rn and 2*Rn <= L/2 (RadiusOrder).
std::pair<Field, Field> split_sequence(const Field& u, const Point& y, double R0,
                                       double Rn);

// --- trichotomy classification ---------------------------------------------------

struct FieldSequence {
    std::vector<Field> fields;
    double c2 = 0.0;  // the common mass
};

// Validates equal grids and a common mass (relative 1e-8) before wrapping.
FieldSequence field_sequence(std::vector<Field> fields);

enum class CCVerdict { vanishing, dichotomy, compactness };

std::string cc_verdict_name(CCVerdict v);

struct QSample {
    int n = 0;       // index within the sequence
    double R = 0.0;  // ball radius
    double Q = 0.0;  // concentration function value
};

struct CCClassification {
    CCVerdict verdict = CCVerdict::vanishing;
    std::optional<double> a2;    // dichotomy: stabilized inner mass
    std::vector<Point> centers;  // maximizing centers over the trailing half
    std::vector<double> radii;   // compactness: R(eps) per ladder entry;
                                 // dichotomy: {R0, Rn}
    double surplus = 0.0;        // |grad_s u|^2 - |grad_s v|^2 - |grad_s w|^2
    double epsilon = 0.0;        // decision tolerance (smallest ladder entry)
    double mass_inner = 0.0;     // dichotomy: mass of the emitted v
    double mass_outer = 0.0;     // dichotomy: mass of the emitted w
    std::vector<QSample> q_table;  // full (n, R, Q) witness table

    nlohmann::json to_json() const;
    std::string q_table_csv() const;  // n, R, Q rows for plotting
};

// Finite-sample trichotomy decision over a sequence of mass-c^2 fields, all
// trends read off the trailing half against the decreasing eps_ladder:
//
//   compactness: for every eps some ladder radius R(eps) <= L/4 captures
//                c^2 - eps around a tracked center for every trailing field;
//   vanishing:   the excess Q_n(R) - c^2 * (discrete ball volume fraction)
//                is nonincreasing over the trailing half and ends below the
//                smallest eps, for every ladder radius;
//   dichotomy:   otherwise Q_n(.) of each trailing field shows a stable
//                plateau at a common level a2 strictly inside (eps, c2-eps);
//                the splitting at the plateau radii is emitted with its mass
//                and kinetic-surplus witnesses.
//
// Inconclusive is raised (never guessed) when no alternative stabilizes.
// r_ladder defaults to twelve radii spanning [L/64, L/4].
CCClassification classify(const FieldSequence& seq, const std::vector<double>& eps_ladder,
                          std::vector<double> r_ladder = {});

// Translate u by the integer lattice point floor(y), bringing the feature at
// y into the fundamental cell [0,1)^N.  Mass and kinetic energy are exactly
// translation invariant in spectral arithmetic.
Field recenter(const Field& u, const Point& y);

// --- synthetic families ------------------------------------------------------------

enum class SyntheticKind {
    spreading,    // bump flattening into the uniform profile -> vanishing
    translating,  // rigid bump drifting across the box -> compactness
    separating,   // unequal bump pair marching apart -> dichotomy
};

std::string synthetic_kind_name(SyntheticKind k);

// Deterministic family of `count` fields at mass c2 on the given grid; the
// seed jitters widths, amplitudes, and drift within safe envelopes so suites
// can draw several distinct sequences per kind.
FieldSequence synthetic_sequence(SyntheticKind kind, const Grid& grid, int count,
                                 double c2, std::uint64_t seed = 0);

}  // namespace fracmin
