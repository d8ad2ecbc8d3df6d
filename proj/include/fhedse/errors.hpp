// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fhedse {

/// Base error type. Every failure carries a stable machine-readable code
/// (e.g. "InvariantViolation") alongside the human-readable message; the
/// CLI maps codes to exit statuses and error records.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg) : Error("InvariantViolation", msg) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg) : Error("LengthMismatch", msg) {}
};

struct BadFactorization : Error {
    explicit BadFactorization(const std::string& msg) : Error("BadFactorization", msg) {}
};

struct BadSize : Error {
    explicit BadSize(const std::string& msg) : Error("BadSize", msg) {}
};

struct NoSuchRoot : Error {
    explicit NoSuchRoot(const std::string& msg) : Error("NoSuchRoot", msg) {}
};

struct TargetTooLarge : Error {
    explicit TargetTooLarge(const std::string& msg) : Error("TargetTooLarge", msg) {}
};

struct CoefficientOutOfRange : Error {
    explicit CoefficientOutOfRange(const std::string& msg) : Error("CoefficientOutOfRange", msg) {}
};

struct WrongDomain : Error {
    explicit WrongDomain(const std::string& msg) : Error("WrongDomain", msg) {}
};

struct BadTileSize : Error {
    explicit BadTileSize(const std::string& msg) : Error("BadTileSize", msg) {}
};

struct IncompleteTile : Error {
    explicit IncompleteTile(const std::string& msg) : Error("IncompleteTile", msg) {}
};

struct BadMode : Error {
    explicit BadMode(const std::string& msg) : Error("BadMode", msg) {}
};

struct PortOutOfRange : Error {
    explicit PortOutOfRange(const std::string& msg) : Error("PortOutOfRange", msg) {}
};

struct UnsupportedDegree : Error {
    explicit UnsupportedDegree(const std::string& msg) : Error("UnsupportedDegree", msg) {}
};

struct DoesNotFitAffiliation : Error {
    explicit DoesNotFitAffiliation(const std::string& msg) : Error("DoesNotFitAffiliation", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

}  // namespace fhedse
