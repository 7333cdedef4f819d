#pragma once

#include <stdexcept>
#include <string>

namespace afb {

struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// Shapes of two operands (or of a grid and a model) disagree.
struct DimensionError : Error
{
  using Error::Error;
};

// A scalar argument or configuration field is outside its valid range.
struct ParameterError : Error
{
  using Error::Error;
};

// A serialized container or config file is malformed.
struct FormatError : Error
{
  using Error::Error;
};

struct IoError : Error
{
  using Error::Error;
};

} // namespace afb
