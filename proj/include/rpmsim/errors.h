#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rpm {

enum class ErrorKind { not_found, conflict, validation, format, version, io, invalid_mode };

std::string_view to_string(ErrorKind kind);

/// Base of every error the library raises. `kind` is machine readable and
/// is what the HTTP layer and the CLI map onto status/exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& m) : Error(ErrorKind::not_found, m) {}
};

class ConflictError : public Error {
public:
    explicit ConflictError(const std::string& m) : Error(ErrorKind::conflict, m) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& m) : Error(ErrorKind::format, m) {}
};

class VersionError : public Error {
public:
    explicit VersionError(const std::string& m) : Error(ErrorKind::version, m) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

class InvalidModeError : public Error {
public:
    explicit InvalidModeError(const std::string& m) : Error(ErrorKind::invalid_mode, m) {}
};

/// Carries the individual problems (config field names or cohort
/// violations rendered as text) alongside the summary message.
class ValidationError : public Error {
public:
    ValidationError(const std::string& m, std::vector<std::string> details)
        : Error(ErrorKind::validation, m), details_(std::move(details)) {}
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    std::vector<std::string> details_;
};

} // namespace rpm
