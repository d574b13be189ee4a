#pragma once

#include <stdexcept>
#include <string>

namespace bogo {

// Invalid input to an operation (bad parameters, mismatched shapes).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical guard refused to run: truncation would corrupt the result,
// a basis is too large, or an asymptotic model is invalid at this N.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative solver did not converge or lost its bracket.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bogo
