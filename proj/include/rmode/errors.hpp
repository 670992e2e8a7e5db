#pragma once

#include <stdexcept>
#include <string>

namespace rmode {

/// Index or range argument outside the valid domain.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// select() asked for an ordinal that does not exist.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input handed to a builder (empty text, non-monotone view, ...).
class BuildError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A query strategy or backend was requested that the index was not built with.
class ConfigError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Serialized data failed magic/checksum/structure validation.
class CorruptIndex : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rmode
