#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosym {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A point violates one of the chart's domain guards (e.g. y <= 0 on a Siegel chart).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Two objects that must live on the same chart do not.
class ChartMismatch : public Error
{
public:
  using Error::Error;
};

/// The structure (or a matrix built from it) is singular at the evaluation point.
class DegenerateStructure : public Error
{
public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class NumericalFailure : public Error
{
public:
  using Error::Error;
};

/// Malformed expression text. `offset` is a byte offset into the source.
class ParseError : public Error
{
public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
      : Error(std::move(message)), offset_(offset), expected_(std::move(expected))
  {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string> & expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace cosym
