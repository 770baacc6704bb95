#pragma once

#include <stdexcept>
#include <string>

namespace fracmin {

// Base of the library's error taxonomy. Every domain error carries a stable
// symbolic name that the CLI prints on stderr before exiting with code 1, so
// scripts can dispatch on it without parsing prose.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define FRACMIN_ERROR_TYPE(Name)                                              \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    }

FRACMIN_ERROR_TYPE(DimensionUnsupported);  // operation defined for N=1 (or N in {1,2}) only
FRACMIN_ERROR_TYPE(ZeroField);             // mass(u) = 0 where a direction is required
FRACMIN_ERROR_TYPE(ProfileOverflow);       // dilated profile support exceeds the box
FRACMIN_ERROR_TYPE(TabulationRange);       // user-tabulated nonlinearity queried out of range
FRACMIN_ERROR_TYPE(MissingComparison);     // periodic comparison requested but spec has none
FRACMIN_ERROR_TYPE(PrerequisiteFailed);    // a check's precondition (e.g. I_c < 0) does not hold
FRACMIN_ERROR_TYPE(RadiusTooLarge);        // ball radius exceeds half the box
FRACMIN_ERROR_TYPE(RadiusOrder);           // cutoff radii violate 0 < 2*R0 < Rn, 2*Rn <= L/2
FRACMIN_ERROR_TYPE(InsufficientScan);      // required mass points missing, interpolation disabled
FRACMIN_ERROR_TYPE(Inconclusive);          // sequence too short for a stable trichotomy verdict
FRACMIN_ERROR_TYPE(DivergentEnergy);       // energy fell through the configured floor
FRACMIN_ERROR_TYPE(ConfigError);           // schema or invariant violation (names the rule)

#undef FRACMIN_ERROR_TYPE

}  // namespace fracmin
