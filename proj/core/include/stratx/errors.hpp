#pragma once

#include <stdexcept>
#include <string>

namespace stratx {

// Bad input data or configuration: missing file or column, type mismatch,
// invalid parameter values. CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fewer than two x values survived the slope-count filter, so no curve can
// be integrated. CLI maps this to exit code 3.
class InsufficientSupportError : public std::runtime_error {
public:
    InsufficientSupportError() : std::runtime_error("insufficient supported x values") {}
    using std::runtime_error::runtime_error;
};

// Every category ended up without a finite effect estimate. CLI exit code 4.
class NoSupportedCategoriesError : public std::runtime_error {
public:
    NoSupportedCategoriesError() : std::runtime_error("no supported categories") {}
    using std::runtime_error::runtime_error;
};

} // namespace stratx
