#pragma once

#include <stdexcept>
#include <string>

namespace loglm {

// Base class for every error the library raises. Subclasses map onto the
// CLI exit codes: config -> 1, data/parse/sequence/io -> 2, numeric -> 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shapes do not conform for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

// An index (token id, row, position) is out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

// A call violated an API precondition (non-scalar loss, user mismatch, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

// Invalid or inconsistent run configuration, including illegal model combos.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed input data (bad CSV line, wrong field count, bad byte).
class ParseError : public Error {
public:
    using Error::Error;
};

// Data-level problem that is not a parse failure (empty stream for vocab
// construction, single-class label set for AUC).
class DataError : public Error {
public:
    using Error::Error;
};

// Days fed to the online pipeline out of order.
class SequenceError : public Error {
public:
    using Error::Error;
};

// NaN/Inf produced by a forward op, or a rejected NaN gradient update.
class NumericError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace loglm
