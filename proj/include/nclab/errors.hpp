#pragma once

#include <stdexcept>
#include <string>

namespace nclab {

// Everything here is a contract violation at the library surface; callers
// that stay inside the documented preconditions never see these.

struct NonHermitianInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidExponent : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct LevelOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct LevelOrderViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonPositiveField : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nclab
