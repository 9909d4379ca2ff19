// Error types shared by all optri modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optri {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct DegenerateTriangle : Error {
    using Error::Error;
};

struct CoverageError : Error {
    using Error::Error;
};

struct InvalidTriangulation : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct UnknownField : Error {
    using Error::Error;
};

struct NotAdmissible : Error {
    using Error::Error;
};

struct ModulusTooRough : Error {
    using Error::Error;
};

struct GlueError : Error {
    using Error::Error;
};

struct EvalError : Error {
    using Error::Error;
};

// Carries the byte offset of the first token that failed to parse.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

}  // namespace optri
