#ifndef KNOCKOUT_ERROR_HPP
#define KNOCKOUT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace knockout {

/// Malformed or out-of-contract input (bad permutation, unknown name, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data that parses but does not describe a complete tournament,
/// e.g. a season with missing fixtures.
class IncompleteData : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The requested computation exceeds a documented size bound.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A statistical test that has no defined value for the given input.
class UndefinedTest : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace knockout

#endif // KNOCKOUT_ERROR_HPP
