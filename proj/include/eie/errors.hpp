#pragma once

#include <stdexcept>
#include <string>

namespace eie {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad bytes: unreadable files, wrong magic/version, truncation, corrupt slices.
struct FormatError : Error {
    using Error::Error;
};

// Bad arguments: dimension mismatches, out-of-range parameters, degenerate inputs.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace eie
