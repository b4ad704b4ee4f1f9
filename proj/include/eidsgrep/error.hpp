#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eidsgrep {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pattern or dictionary text that cannot be parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Index checksum or size does not match the dictionary on disk.
class StaleIndexError : public Error {
public:
    using Error::Error;
};

// Raised for `.#.`, whose user predicates are not available.
class UnsupportedOperator : public Error {
public:
    using Error::Error;
};

// Runtime query failure, e.g. an invalid regular expression under `./.`.
class QueryError : public Error {
public:
    using Error::Error;
};

} // namespace eidsgrep
