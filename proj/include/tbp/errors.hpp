#pragma once

#include <stdexcept>
#include <string>

namespace tbp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Potential/gradient evaluation requested at (or too close to) a primary.
struct SingularityError : Error {
    using Error::Error;
};

/// Operation requires 0 < mu < 1 but got a degenerate mass ratio.
struct DegenerateMassError : Error {
    using Error::Error;
};

/// Operation is not defined for the given system kind.
struct UnsupportedSystemError : Error {
    using Error::Error;
};

/// Energy too close to a critical value for the requested operation.
struct NearCriticalEnergyError : Error {
    using Error::Error;
};

/// Level-curve tracing could not locate a seed on the requested component.
struct SeedNotFoundError : Error {
    using Error::Error;
};

/// Level-curve tracing did not close up within the step budget.
struct NoClosureError : Error {
    using Error::Error;
};

/// Operation requires a closed curve.
struct NonClosedCurveError : Error {
    using Error::Error;
};

/// Root search failed to bracket or converge; for collinear Lagrange points
/// this indicates an internal bug, not a user error.
struct BracketingError : Error {
    using Error::Error;
};

/// Trajectory came within the guard radius of a primary.
struct SingularityApproachError : Error {
    using Error::Error;
};

/// Adaptive integrator drove the step size below representable resolution.
struct StepUnderflowError : Error {
    using Error::Error;
};

/// Shooting iteration did not converge to a periodic orbit.
struct NoConvergenceError : Error {
    using Error::Error;
};

/// Initial guess for an orbit search lies outside the accessible region.
struct GuessOutsideRegionError : Error {
    using Error::Error;
};

/// Parameter path violates its between-critical-values contract.
struct PathInvariantError : Error {
    using Error::Error;
};

/// A quantitative claim checked by a verification routine failed numerically.
struct VerificationError : Error {
    using Error::Error;
};

} // namespace tbp
