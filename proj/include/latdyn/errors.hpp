#pragma once

#include <stdexcept>
#include <string>

namespace latdyn {

// Base class for everything thrown on purpose by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape mismatches, bad indices, malformed inputs of the "caller broke the
// contract" kind. CLI maps these to the usage exit code.
struct dimension_error : error {
    using error::error;
};

// Mathematically meaningless request: singular matrix where nonsingular is
// required, no real root, d1 = 1 where positive entropy is required, ...
struct domain_error : error {
    using error::error;
};

// d1(f) = 1: the small-dynamical-degree machinery is undefined.
struct no_positive_entropy_error : domain_error {
    using domain_error::domain_error;
};

// A sublattice fed to restrict/quotient is not invariant (or not saturated
// where saturation is required).
struct invariance_error : domain_error {
    using domain_error::domain_error;
};

// A monomial map does not extend to the given fan.
struct non_extendable_error : domain_error {
    using domain_error::domain_error;
};

// Input is beyond a documented capability bound (factor degree cap, fan size
// cap). Distinct from resource_error: the input itself is out of scope.
struct capability_error : error {
    using error::error;
};

// A computation hit a configured resource ceiling (entry bit size, grid size,
// enumeration cap).
struct resource_error : error {
    using error::error;
};

struct enumeration_cap_error : resource_error {
    using resource_error::resource_error;
};

// Malformed config/JSON input.
struct parse_error : error {
    using error::error;
};

} // namespace latdyn
