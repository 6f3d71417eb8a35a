#pragma once

#include <stdexcept>
#include <string>

namespace reldelay {

/// Invalid argument to a model operation (negative density, probability outside [0,1], ...).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A formula evaluated outside its domain (e.g. at or beyond a pole).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An infinite series whose terms do not decay fast enough to converge.
class DivergentSeriesError : public std::runtime_error {
public:
    explicit DivergentSeriesError(const std::string& what) : std::runtime_error(what) {}
};

/// The network/lattice coupling produced a configuration the model says cannot happen.
class ModelViolation : public std::logic_error {
public:
    explicit ModelViolation(const std::string& what) : std::logic_error(what) {}
};

/// A Monte Carlo estimator had no usable samples.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace reldelay
