#pragma once

#include <stdexcept>
#include <string>

namespace beamopt {

// Base class for everything thrown on purpose by this library.
// Callers that only care about "did it fail" can catch this one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or inconsistent configuration / input files.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed record in a CSV/JSON input.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Index outside the valid range (beam ids, sector ids, layer ids, ...).
struct IndexError : Error {
    explicit IndexError(const std::string& msg) : Error(msg) {}
};

// A dataset or file-backed source contained no usable records.
struct EmptyDataset : Error {
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

// Geometry that breaks the antenna/steering math (zero spacing, empty array).
struct DegenerateGeometry : Error {
    explicit DegenerateGeometry(const std::string& msg) : Error(msg) {}
};

// Requested beam-width cannot be met by any aperture subset.
struct UnachievableBeamwidth : Error {
    explicit UnachievableBeamwidth(const std::string& msg) : Error(msg) {}
};

// Vector/matrix sizes disagree (channel vs weights, state vs network input).
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// A UE/sector pair with no path data where one was required.
struct MissingLink : Error {
    explicit MissingLink(const std::string& msg) : Error(msg) {}
};

// Not enough samples to compute the requested statistic.
struct InsufficientSamples : Error {
    explicit InsufficientSamples(const std::string& msg) : Error(msg) {}
};

// Two networks that must share an architecture do not.
struct ArchitectureMismatch : Error {
    explicit ArchitectureMismatch(const std::string& msg) : Error(msg) {}
};

// Tensor shape does not match what a layer expects.
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

// An enumeration or search exceeded its configured budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// A spatial region that must contain at least one point does not.
struct EmptyRegion : Error {
    explicit EmptyRegion(const std::string& msg) : Error(msg) {}
};

// Paired sequences of different lengths.
struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

// Window with no samples in it.
struct EmptyWindow : Error {
    explicit EmptyWindow(const std::string& msg) : Error(msg) {}
};

// Filesystem-level failure (cannot open/read/write).
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace beamopt
