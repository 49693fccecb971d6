#ifndef ORLICZ_ERRORS_HPP_
#define ORLICZ_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orlicz
{

/// Thrown when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Two grid functions (or a function and a subspace) live on different grids.
class GridMismatch : public PreconditionError
{
public:
  GridMismatch()
  : PreconditionError("grid functions are defined on different grids")
  {}
};

/// A modular evaluation produced a non-finite value.
class NumericalError : public std::runtime_error
{
public:
  NumericalError(const std::string & what, std::size_t node, double x)
  : std::runtime_error(what + " at node " + std::to_string(node) + " (x = " +
      std::to_string(x) + ")"),
    node_(node), x_(x)
  {}

  std::size_t node() const noexcept {return node_;}
  double x() const noexcept {return x_;}

private:
  std::size_t node_;
  double x_;
};

}  // namespace orlicz

#endif  // ORLICZ_ERRORS_HPP_
