#pragma once

#include <stdexcept>
#include <string>

namespace hermspec {

/// Invalid argument supplied by the caller (bad dimension, non-finite input, out-of-range parameter).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative numerical method failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was asked to do something it cannot do exactly (e.g. closed-form
/// box/ball intersection volumes).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A checked inequality was violated. The message carries the failing ledger.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hermspec
