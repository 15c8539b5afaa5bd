/// @file error.hpp
/// @brief Exception types shared by the kld library.

#pragma once

#include <stdexcept>
#include <string>

namespace kld {

/// Broad failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
    usage,      ///< bad parameter or configuration (exit 1)
    data,       ///< malformed or inconsistent input data (exit 2)
    invariant,  ///< internal consistency violation (exit 3)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class InvariantError : public Error {
public:
    explicit InvariantError(const std::string& what) : Error(ErrorKind::invariant, what) {}
};

}  // namespace kld
