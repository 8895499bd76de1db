#pragma once

#include <stdexcept>
#include <string>

namespace coneforge {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Point lies outside the dual sector; the distance map is not monotone there.
class PointNotInDualCone : public Error {
public:
    using Error::Error;
};

// Requested distance lies outside the attainable interval for the point.
class DistanceOutOfRange : public Error {
public:
    using Error::Error;
};

// Refinement would exceed the configured cone budget.
class ConeBudgetExceeded : public Error {
public:
    using Error::Error;
};

// A generated cover failed its sampling verification; message carries the
// first counterexample.
class CoverVerificationFailed : public Error {
public:
    using Error::Error;
};

// No host subspace meets the open ball of a placement.
class NoIntersectingHost : public Error {
public:
    using Error::Error;
};

// The punctured point x0 + r0*T0(e1) lies inside the ball.
class PunctureInsideBall : public Error {
public:
    using Error::Error;
};

// No aperture below the requested angle separates the ball from the
// construction region.
class InfeasibleAperture : public Error {
public:
    using Error::Error;
};

// No forest cone yields a line at the requested distance. Indicates either a
// violated precondition or a construction bug.
class WitnessNotFound : public Error {
public:
    using Error::Error;
};

// Two point clouds over different base spaces cannot be compared.
class TagMismatch : public Error {
public:
    using Error::Error;
};

// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace coneforge
