#pragma once

#include <stdexcept>
#include <string>

namespace splineproj {

// Base class for every error thrown by this library.  The concrete type name
// is prefixed to the message so callers (and the CLI) can report it verbatim.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSorted : Error {
    explicit NotSorted(const std::string& m) : Error("NotSorted: " + m) {}
};

struct MultiplicityViolation : Error {
    explicit MultiplicityViolation(const std::string& m) : Error("MultiplicityViolation: " + m) {}
};

struct TooFewKnots : Error {
    explicit TooFewKnots(const std::string& m) : Error("TooFewKnots: " + m) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& m) : Error("OutOfRange: " + m) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& m) : Error("IndexOutOfRange: " + m) {}
};

struct DomainViolation : Error {
    explicit DomainViolation(const std::string& m) : Error("DomainViolation: " + m) {}
};

struct EmptySet : Error {
    explicit EmptySet(const std::string& m) : Error("EmptySet: " + m) {}
};

struct EmptyCell : Error {
    explicit EmptyCell(const std::string& m) : Error("EmptyCell: " + m) {}
};

struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& m) : Error("NotPositiveDefinite: " + m) {}
};

struct DimensionTooLarge : Error {
    explicit DimensionTooLarge(const std::string& m) : Error("DimensionTooLarge: " + m) {}
};

struct NonFiniteSample : Error {
    explicit NonFiniteSample(const std::string& m) : Error("NonFiniteSample: " + m) {}
};

struct WindowTooSmall : Error {
    explicit WindowTooSmall(const std::string& m) : Error("WindowTooSmall: " + m) {}
};

struct DegenerateFit : Error {
    explicit DegenerateFit(const std::string& m) : Error("DegenerateFit: " + m) {}
};

// File / flag parsing problems; the CLI maps these to the config exit code.
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("ParseError: " + m) {}
};

// Filesystem failures (unwritable output path and the like); also a config
// exit in the CLI.
struct IoError : Error {
    explicit IoError(const std::string& m) : Error("IoError: " + m) {}
};

}  // namespace splineproj
