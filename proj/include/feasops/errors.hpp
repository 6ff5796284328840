#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace feasops {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two points (or a point and a set) of incompatible dimension.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Projection request at a point where the nearest-point map is not
/// single-valued (sphere kinds at the origin).
class MultiValuedProjection : public Error {
public:
    using Error::Error;
};

/// Sphere/line intersection requested for a line that misses the sphere.
class EmptyIntersection : public Error {
public:
    using Error::Error;
};

/// Rejection sampling cannot produce points (empty region or acceptance
/// rate below the cutoff).
class SamplingError : public Error {
public:
    using Error::Error;
};

/// An (anchor, value) pair set violates its own Lipschitz constant, so no
/// extension with that constant exists.
class SampleConsistencyError : public Error {
public:
    using Error::Error;
};

/// The minimax solver could not certify a feasible extension value.
class InfeasibleExtension : public Error {
public:
    using Error::Error;
};

/// A smoothing plan fails one or more preconditions; each entry names the
/// violated inequality with both sides' values.
class PlanValidationError : public Error {
public:
    PlanValidationError(std::string what, std::vector<std::string> violations)
        : Error(std::move(what)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace feasops
