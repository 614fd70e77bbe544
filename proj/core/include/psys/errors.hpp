#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psys {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// q-transform evaluated at a point on the wrong side of its anchor.
class WrongSide : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// q-inverse target outside the attained range of q on the search bracket.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Quantity undefined inside the |sigma'| <= eps boundary band.
class BoundaryDegeneracy : public Error {
public:
    using Error::Error;
};

/// Characteristic seed does not lie in a strictly hyperbolic region.
class StartNotHyperbolic : public Error {
public:
    using Error::Error;
};

/// Operation needs neighbouring frames that the field does not have.
class InsufficientFrames : public Error {
public:
    using Error::Error;
};

/// Initial frame is not contained in a single hyperbolic component.
class InitialNotHyperbolic : public Error {
public:
    using Error::Error;
};

/// Iterative procedure exhausted its iteration budget.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Weight interval [alpha, beta] collapsed to a point.
class DegenerateInterval : public Error {
public:
    using Error::Error;
};

/// Time integrator rejected a step (blow-up monitors tripped).
class StepRejected : public Error {
public:
    StepRejected(const std::string& what, double last_valid_time)
        : Error(what), last_valid_time(last_valid_time) {}
    double last_valid_time;
};

/// Path integrator could not take a step (non-finite data, bad field).
class StepFailureError : public Error {
public:
    using Error::Error;
};

/// Energy functional evaluated on a frame leaving the elliptic band.
class OutsideEllipticBand : public Error {
public:
    OutsideEllipticBand(const std::string& what, std::vector<std::pair<int, double>> points)
        : Error(what), offending_points(std::move(points)) {}
    /// (grid index, u value) for the first few points outside [alpha, beta].
    std::vector<std::pair<int, double>> offending_points;
};

/// Filesystem problem while emitting artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace psys
