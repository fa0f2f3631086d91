#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dclut
{

/*! \brief An input address outside `[0, 2^w_in)`. */
class address_error : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/*! \brief Malformed text input; carries the 1-based line number (0 if unknown). */
class parse_error : public std::runtime_error
{
public:
  parse_error( std::size_t line, std::string const& what )
      : std::runtime_error( line == 0 ? what : "line " + std::to_string( line ) + ": " + what ),
        line_( line )
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/*! \brief Caller supplied inconsistent arguments (size mismatch, bad identifier, ...). */
class usage_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/*! \brief An internal invariant failed; indicates a bug, not bad input. */
class invariant_error : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/*! \brief An exhaustive routine was asked to run outside its enforced bounds. */
class bounds_error : public std::length_error
{
public:
  using std::length_error::length_error;
};

} // namespace dclut
