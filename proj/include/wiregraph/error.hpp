#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wiregraph {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (XML, JSON, config). `line` is 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A document parsed but violates a record-level invariant.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::vector<int> offending = {})
        : Error(what), offending_(std::move(offending)) {}
    const std::vector<int>& offending_ids() const { return offending_; }

private:
    std::vector<int> offending_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition (wrong shape, bad range).
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace wiregraph
