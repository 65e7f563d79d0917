#pragma once

#include <stdexcept>
#include <string>

namespace playtest {

// Malformed configuration or input data: bad level pack fields, CSV schema
// mismatches, out-of-range parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller broke an operation's precondition (programming error, not data).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Too few observations for the requested fit or estimate.
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rank correlation is undefined (zero variance in at least one input).
struct UndefinedCorrelationError : std::runtime_error {
    explicit UndefinedCorrelationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem write failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A required input file does not exist or cannot be opened for reading.
struct MissingInputError : std::runtime_error {
    explicit MissingInputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace playtest
