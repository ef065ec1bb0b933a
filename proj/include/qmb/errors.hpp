// errors.hpp - exception types shared by the qmb headers.

#pragma once

#include <stdexcept>
#include <string>

namespace qmb {

// Non-finite or out-of-range model parameter.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the domain where a closed form is defined (e.g. g outside (0,1]).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A quantity that is undefined for the given input (e.g. delta of a degenerate comb).
class NotApplicable : public std::runtime_error {
public:
    explicit NotApplicable(const std::string& what) : std::runtime_error(what) {}
};

// Laplace-domain evaluation at a root of the determinant.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

// Two independent computations disagree; signals a bug, not bad input.
class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

// Numerical integration drifted beyond its accuracy bound.
class AccuracyError : public std::runtime_error {
public:
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or non-covering coupling schedule.
class ScheduleError : public std::invalid_argument {
public:
    explicit ScheduleError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qmb
