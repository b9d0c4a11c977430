#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwk {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input belongs to a parameter regime the library does not evaluate
/// (complex kernel parameters).
class UnsupportedModeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Gamma-type function evaluated at a pole.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Intermediate or final magnitude not representable in double precision.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Combinatorial or cubic-cost routine asked for a size beyond its hard guard.
class SizeGuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Adaptive quadrature did not reach its tolerance. Carries the best
/// estimate so callers can report it, but never returns it silently.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), error_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_; }

private:
    double best_;
    double error_;
};

/// A leading principal minor vanished (relative to the pivot tolerance)
/// during an unpivoted LDU factorization.
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, std::size_t pivot_index)
        : std::runtime_error(what), index_(pivot_index) {}

    /// Zero-based index k of the first failing pivot D_kk.
    std::size_t pivot_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace mwk
