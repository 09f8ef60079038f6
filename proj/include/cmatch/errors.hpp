#pragma once

#include <stdexcept>
#include <string>

namespace cmatch {

/// Malformed choice specification (missing table row, non-total order, bad scheme).
class spec_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A set was passed outside the universe or domain it is defined on.
class domain_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// An exhaustive scan was refused because the universe exceeds the configured bound.
class size_error : public std::length_error {
public:
    size_error(const std::string& what, int size, int bound)
        : std::length_error(what), size_(size), bound_(bound) {}

    int size() const noexcept { return size_; }
    int bound() const noexcept { return bound_; }

private:
    int size_;
    int bound_;
};

/// Operation called on inputs violating its documented precondition.
class precondition_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Instance file could not be parsed. `where` is a JSON pointer to the offending node.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::string where)
        : std::runtime_error(where.empty() ? what : what + " (at " + where + ")"),
          where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace cmatch
