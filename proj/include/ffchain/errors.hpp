#pragma once

#include <stdexcept>
#include <string>

namespace ffchain {

/// Mismatched chain length or cell dimension between operands.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A coefficient required to be semisimple failed the rank test.
struct SemisimplicityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The normal-form cleanup left a commutator residual above tolerance,
/// or a precondition on the almost normal form was violated.
struct NormFormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A branch solve failed (Newton divergence or non-convergence).
struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A branch was requested on the wrong side of the bifurcation value.
struct SideError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive step size underflowed; the problem looks stiff at this tolerance.
struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No periodic orbit detected (decay to equilibrium or wrong parameter side).
struct NoOrbitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Power-law fit rejected (too few points or insufficient span).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration or term text could not be parsed; message carries line info.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Response function is not invariant under the rotation symmetry.
struct InvarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A symbolic operation produced terms above the configured degree cap.
struct DegreeOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ffchain
