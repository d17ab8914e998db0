#pragma once

#include <stdexcept>
#include <string>

namespace waypath {

// Base for all errors raised by the library. The CLI maps subclasses to
// exit codes: input/parse errors -> 2, infeasibility -> 3, size guard -> 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A G-code line whose words/coordinates cannot be parsed.
struct MalformedLineError : Error {
    int line_no;
    MalformedLineError(int line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line_no(line) {}
};

// A G-code mode outside the supported subset (arcs, non-planar extrusion, ...).
struct UnsupportedModeError : Error {
    int line_no;
    UnsupportedModeError(int line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": unsupported: " + detail),
          line_no(line) {}
};

// Input contains no extruding move at all.
struct EmptyModelError : Error {
    EmptyModelError() : Error("no extruding move in input") {}
};

// Native JSON document violates the schema; path points at the offender.
struct SchemaError : Error {
    std::string path;
    SchemaError(std::string json_path, const std::string& detail)
        : Error(json_path + ": " + detail), path(std::move(json_path)) {}
};

struct LayerOutOfRangeError : Error {
    LayerOutOfRangeError(int layer, int layer_count)
        : Error("layer " + std::to_string(layer) + " out of range [0, " +
                std::to_string(layer_count) + ")") {}
};

// An order that violates the dependency graph reached an execution surface.
struct InfeasibleToolpathError : Error {
    using Error::Error;
};

struct NotAPermutationError : Error {
    using Error::Error;
};

struct SameContourError : Error {
    SameContourError(int id)
        : Error("degree of connectedness undefined for a contour with itself (id " +
                std::to_string(id) + ")") {}
};

// plan_exact refused an instance above its enumeration limit.
struct TooLargeError : Error {
    TooLargeError(std::size_t n, int limit)
        : Error("model has " + std::to_string(n) + " contours, exact planner limit is " +
                std::to_string(limit)) {}
};

// A Model that violates its structural invariants.
struct InvalidModelError : Error {
    using Error::Error;
};

}  // namespace waypath
