// errors.hpp: Exception hierarchy shared by all mlea modules.

#pragma once

#include <stdexcept>
#include <string>

namespace mlea {

// Base for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible matrix dimensions or index out of range.
struct dimension_error : error {
    using error::error;
};

// An evaluation left the representable range (exp overflow etc).
struct range_error : error {
    using error::error;
};

// A caller-declared bound or precondition was violated.
struct contract_error : error {
    using error::error;
};

// An API used out of sequence (stale context, wrong round).
struct usage_error : error {
    using error::error;
};

// An iterative solver exhausted its iteration budget.
struct convergence_error : error {
    using error::error;
};

// A runtime-checked mathematical invariant failed.
struct invariant_error : error {
    using error::error;
};

// A configuration file failed validation; message carries the field path.
struct config_error : error {
    using error::error;
};

}  // namespace mlea
