#pragma once

#include <stdexcept>
#include <string>

namespace hkg {

/// Base class for every error thrown on purpose by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Checked 64-bit arithmetic would wrap.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error(what) {}
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Two routes that must agree disagreed, or an internal invariant failed.
class InconsistencyError : public Error {
public:
    explicit InconsistencyError(const std::string& what) : Error(what) {}
};

/// A bounded computation ran out of budget; the answer is indeterminate.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(what) {}
};

} // namespace hkg
