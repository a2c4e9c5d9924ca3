#pragma once

#include <stdexcept>
#include <string>

namespace tokencomp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed JSON, invalid documents, unreadable assets,
/// bad configuration. Maps to CLI exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

class AssetError : public InputError {
public:
    using InputError::InputError;
};

/// Violated operation contract (shape mismatch, out-of-range index, backend
/// misuse). Maps to CLI exit code 2.
class ContractError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public ContractError {
public:
    using ContractError::ContractError;
};

}  // namespace tokencomp
