#pragma once

#include <stdexcept>
#include <string>

namespace fplab {

// Thrown when a computation runs but produces an unusable result
// (non-finite state, singular solve, non-simple zero eigenvalue...).
// Precondition violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fplab
