#pragma once

#include <stdexcept>
#include <string>

namespace gsa {

/// Base class for all errors raised by the library. Subclasses name the
/// violated condition so tests and the CLI can react to the category.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A weight matrix is not row-stochastic (row sum off, or negative entry).
class NotStochastic : public Error {
public:
    using Error::Error;
};

/// The support graph of the weight matrix is not strongly connected.
class Reducible : public Error {
public:
    using Error::Error;
};

/// Some eigenvalue of the deviation matrix Q has magnitude too close to 1.
class SpectralViolation : public Error {
public:
    using Error::Error;
};

/// An iterative solve did not reach its residual target within the cap.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// A stepsize schedule failed one or more admissibility conditions.
class Inadmissible : public Error {
public:
    using Error::Error;
};

/// Partial stepsize sums never reached the requested window length.
class HorizonExceeded : public Error {
public:
    using Error::Error;
};

/// A NaN or Inf appeared in an iterate or integrator state.
class NonFinite : public Error {
public:
    using Error::Error;
};

/// A query time lies outside the interpolated trajectory's domain.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// An ODE trajectory left the configured guard box.
class RegionExit : public Error {
public:
    using Error::Error;
};

/// The per-window Lyapunov descent margin came out non-positive.
class NonPositiveMargin : public Error {
public:
    using Error::Error;
};

/// Fewer replicas satisfied the conditioning event than required.
class InsufficientConditioning : public Error {
public:
    using Error::Error;
};

/// A tail series does not decay (e.g. constant stepsizes).
class Divergent : public Error {
public:
    using Error::Error;
};

/// Config file could not be parsed or contains unknown/invalid fields.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Matrix/array dimensions do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace gsa
