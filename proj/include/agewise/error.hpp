#pragma once

#include <stdexcept>
#include <string>

namespace agewise {

/// Invalid input to a library operation: bad parameter, point outside the
/// support, failed precondition. Maps to CLI exit status 1.
class DomainError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A moment or mean that does not exist for the model.
class InfiniteMomentError : public DomainError
{
  public:
    using DomainError::DomainError;
};

/// Numerical procedure could not reach its tolerance.
class ConvergenceError : public DomainError
{
  public:
    using DomainError::DomainError;
};

/// Malformed command line. Maps to CLI exit status 2.
class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace agewise
