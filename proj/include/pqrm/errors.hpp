// errors.hpp: exception hierarchy shared by all pqrm modules

#pragma once

#include <stdexcept>
#include <string>

namespace pqrm {

/// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A run that became numerically invalid: boundary contact, norm drift,
/// Fock truncation, band-model breakdown (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;

    /// Same error type with a coordinate prefix, e.g. "[pqrm t=1.2e-3 s]".
    [[nodiscard]] NumericalError with_context(const std::string& where) const {
        return NumericalError(where + " " + what());
    }
};

class BoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Population left the kept Bloch bands (two-band approximation breakdown).
class BandBreakdownError : public NumericalError {
public:
    BandBreakdownError(const std::string& msg, double discarded)
        : NumericalError(msg), discarded_weight(discarded) {}
    double discarded_weight;
};

/// Malformed CSV handed to the plotter.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pqrm
