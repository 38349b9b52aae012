#pragma once

#include <stdexcept>
#include <string>

namespace vlambda {

/// Base of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (table limits, engine settings).
class config_error : public error {
public:
    using error::error;
};

/// Argument outside the range the precomputed data supports.
class range_error : public error {
public:
    using error::error;
};

/// Argument violates a mathematical precondition (non-prime p, h = 0, ...).
class domain_error : public error {
public:
    using error::error;
};

/// A 64-bit intermediate would overflow.
class overflow_error : public error {
public:
    using error::error;
};

/// A search would exceed its complexity guard.
class complexity_error : public error {
public:
    using error::error;
};

/// A persisted series file is malformed or of the wrong version.
class corruption_error : public error {
public:
    using error::error;
};

/// Writing a checkpoint record failed; state on disk is still resumable.
class sink_error : public error {
public:
    using error::error;
};

} // namespace vlambda
