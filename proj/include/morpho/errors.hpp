#pragma once

#include <stdexcept>
#include <string>

namespace morpho {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input: non-finite coordinates, too few
// vertices, mismatched accumulators, undersized images.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Polygon given in clockwise order where counterclockwise is required.
class OrientationError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Tensor rank requested outside 0..s_max.
class RangeError : public Error {
public:
    using Error::Error;
};

// q_s of an accumulator with zero perimeter.
class UndefinedMetric : public Error {
public:
    using Error::Error;
};

// Preferred direction of a vanishing Psi_s.
class NoDirection : public Error {
public:
    using Error::Error;
};

// Collinear or otherwise degenerate point sets.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class EmptyHistogram : public Error {
public:
    using Error::Error;
};

// Text input that fails to parse. Carries the 1-based line number.
class ParseError : public InvalidInput {
public:
    ParseError(int line, const std::string& what)
        : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// File-system level failures: missing files, unwritable paths.
class IoError : public Error {
public:
    using Error::Error;
};

// Well-formed PNG using a feature outside the supported subset.
class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

// Corrupt or truncated image stream.
class DecodeError : public Error {
public:
    using Error::Error;
};

}  // namespace morpho
