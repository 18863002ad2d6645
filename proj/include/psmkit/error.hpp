#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace psmkit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document; `field()` names the offending field.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error("parse error at '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class JointLimitError : public Error {
public:
    JointLimitError(std::size_t joint, double value, double lo, double hi)
        : Error("joint " + std::to_string(joint) + " value " + std::to_string(value) +
                " outside limits [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          joint_(joint) {}
    std::size_t joint() const noexcept { return joint_; }

private:
    std::size_t joint_;
};

/// A sensor reading outside its representable range.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Insufficient excitation: too small a sweep, or parallel rotation axes.
class DegenerateMotionError : public Error {
public:
    DegenerateMotionError(const std::string& what, double measure)
        : Error(what), measure_(measure) {}
    /// The measured quantity that fell below threshold (sweep in volts, or axis angle in radians).
    double measure() const noexcept { return measure_; }

private:
    double measure_;
};

class SearchError : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace psmkit
