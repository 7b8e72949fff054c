#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rotsym {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected)
        : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected),
          offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NonFiniteResult : public Error {
public:
    using Error::Error;
};

class NonPositiveMetric : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class NotMonotone : public Error {
public:
    using Error::Error;
};

class TargetOutOfRange : public Error {
public:
    using Error::Error;
};

class MaxStepsExceeded : public Error {
public:
    using Error::Error;
};

class InfeasibleBoundaryData : public Error {
public:
    using Error::Error;
};

class ImmediateBreakdown : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidS0 : public Error {
public:
    using Error::Error;
};

class InvalidConstant : public Error {
public:
    using Error::Error;
};

}  // namespace rotsym
