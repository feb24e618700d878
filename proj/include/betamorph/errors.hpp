#pragma once

#include <stdexcept>
#include <string>

namespace betamorph {

// Common base so callers can catch everything raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments / inputs that a caller could have validated up front.
struct InputError : Error {
    using Error::Error;
};

// Field construction: defining polynomial has no root in the admissible interval.
struct NoRootError : InputError {
    using InputError::InputError;
};

// Field construction: several roots and no hint to pick one.
struct AmbiguousRootError : InputError {
    using InputError::InputError;
};

// Sign query did not resolve within the bisection budget.  For a well-formed
// field this cannot happen on a nonzero element; it signals a defining
// polynomial whose residues are not faithful (e.g. a reducible squarefree part).
struct UndecidableComparisonError : Error {
    using Error::Error;
};

// Requested enclosure width below the field's precision floor.
struct PrecisionExceededError : InputError {
    using InputError::InputError;
};

// Point outside the map's domain [0,1].
struct MapDomainError : InputError {
    using InputError::InputError;
};

// Index outside the validity range of a closed form.
struct ValidityRangeError : InputError {
    using InputError::InputError;
};

// Hypothesis of a verified statement not satisfied by this beta.
struct HypothesisError : InputError {
    using InputError::InputError;
};

// Work would exceed a configured budget (branch counts, iterate depth).
struct ResourceError : Error {
    using Error::Error;
};

// A computed object does not match any expected shape.
struct ClassificationError : Error {
    using Error::Error;
};

// Partition fails the Markov property.
struct NotMarkovError : Error {
    using Error::Error;
};

// Isomorphism certificate could not be assembled.
struct CertificateError : Error {
    using Error::Error;
};

// Operation called outside the regime it is defined for.
struct WrongRegimeError : InputError {
    using InputError::InputError;
};

}  // namespace betamorph
