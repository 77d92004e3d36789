#pragma once

#include <stdexcept>
#include <string>

namespace wsl {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain it must belong to.
struct DomainError : Error {
    using Error::Error;
};

/// Two grid functions do not share interval/resolution.
struct ShapeError : Error {
    using Error::Error;
};

/// A curvature query inside the pole guard, where the warped-product
/// formulas are singular.  Carries the offending coordinate.
struct PoleProximityError : Error {
    PoleProximityError(const std::string& what, double s_) : Error(what), s(s_) {}
    double s;
};

/// Second derivative of sampled data requested at an endpoint.
struct UnsupportedPointError : Error {
    using Error::Error;
};

/// The warping function vanishes on an interior interval separating the
/// query points; the distance problem is ill-posed there.
struct DisconnectedRegionError : Error {
    using Error::Error;
};

/// A generator could not build a valid profile from its parameters.
struct ConstructionError : Error {
    using Error::Error;
};

/// An operation's stated precondition does not hold for the inputs.
struct PreconditionError : Error {
    using Error::Error;
};

/// Malformed specification file or expression text.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace wsl
