#pragma once

#include <stdexcept>
#include <string>

namespace ringlase {

/// Input outside an operation's domain (non-positive wavelength, Q <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid scenario or parameter combination.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to converge. Carries the last iterate.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_iterate, int iterations)
        : std::runtime_error(what), last_iterate_(last_iterate), iterations_(iterations) {}

    double last_iterate() const noexcept { return last_iterate_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_iterate_;
    int iterations_;
};

/// Post-processing failure (no detectable peak, empty spectrum, ...).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ringlase
