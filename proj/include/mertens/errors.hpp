#pragma once

#include <stdexcept>
#include <string>

namespace mertens {

// Caller violated a documented precondition (range caps, table too short, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Stored data failed a checksum or structural check.
class integrity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A floating-point oracle produced a value too far from an integer.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mertens
