#pragma once

#include <stdexcept>
#include <string>

namespace qtz {

// Base class for all library errors. Subcommands map these to exit codes:
// shape/usage -> 1, numerical failure -> 2, I/O -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct ZeroQuaternion : Error {
    ZeroQuaternion() : Error("quat: inverse of (near-)zero quaternion") {}
};

struct Singular : Error {
    int slice = -1;  // hat-slice index when raised inside a tensor loop, else -1
    explicit Singular(const std::string& what, int slice_ = -1) : Error(what), slice(slice_) {}
};

struct NoConvergence : Error {
    int slice = -1;
    explicit NoConvergence(const std::string& what, int slice_ = -1) : Error(what), slice(slice_) {}
};

struct ZeroPivot : Error {
    int slice = -1;  // -1 for plain matrix calls
    int step = -1;   // elimination step (0-based)
    ZeroPivot(const std::string& what, int slice_, int step_) : Error(what), slice(slice_), step(step_) {}
};

struct StructureViolation : Error {
    using Error::Error;
};

struct NotPureUnit : Error {
    int slice = -1;
    int entry = -1;
    NotPureUnit(const std::string& what, int slice_, int entry_) : Error(what), slice(slice_), entry(entry_) {}
};

struct TooFewFrames : Error {
    using Error::Error;
};

struct UnknownKind : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace qtz
