// Error types shared by all m3icro components.
#pragma once

#include <stdexcept>
#include <string>

namespace m3icro {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Matrix/vector shape mismatch.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input outside its documented domain (e.g. eps not in [0,1], division by zero).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid argument value (empty grid, p < 1, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Enumeration would exceed a configured memory cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Malformed file (bad magic, version, CRC, truncation).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Inconsistent run configuration (untrained surrogate, missing input, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace m3icro
