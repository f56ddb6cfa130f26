#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace darboux {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed expression text. `offset` is a byte offset into the source.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(std::size_t offset, const std::string& name);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ArityError : public ParseError {
public:
    ArityError(std::size_t offset, const std::string& function, std::size_t expected, std::size_t got);
};

// Evaluation outside the domain of a primitive (ln, sqrt, division).
class DomainError : public Error {
public:
    using Error::Error;
};

class DivisionByZeroInterval : public DomainError {
public:
    DivisionByZeroInterval() : DomainError("division by an interval containing zero") {}
};

// Arithmetic left the finite doubles; intervals never carry infinite endpoints.
class IntervalOverflow : public DomainError {
public:
    IntervalOverflow() : DomainError("interval endpoint overflow") {}
};

// Pointwise value is not decidable from the argument's provenance.
class EvalUndecidable : public Error {
public:
    using Error::Error;
};

class InvalidInterval : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class NonPositiveTolerance : public Error {
public:
    NonPositiveTolerance() : Error("tolerance must be positive") {}
};

} // namespace darboux
