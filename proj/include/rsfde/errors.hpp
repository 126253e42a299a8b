#ifndef RSFDE_ERRORS_HPP
#define RSFDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rsfde {

/// Vector or matrix sizes that do not conform.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter outside its mathematical domain (e.g. alpha not in (1,2]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A problem or run description that is incomplete or inconsistent.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Manufactured source requested for a profile we cannot differentiate.
class UnsupportedSource : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The coefficient e(x,t) is not bounded away from zero on the grid.
class InvalidCoefficient : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void require_size(std::size_t got, std::size_t want, const char* what)
{
    if (got != want) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                             ", got " + std::to_string(got));
    }
}

} // namespace detail
} // namespace rsfde

#endif
