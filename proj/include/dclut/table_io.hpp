#pragma once

#include <dclut/table.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace dclut
{

/*! \brief A table read from text together with how its widths were obtained. */
struct loaded_table
{
  lookup_table table;
  std::size_t lines{ 0 };
  bool output_bits_inferred{ false };
  std::uint64_t max_value{ 0 };

  /*! \brief One-line human description of the width inference. */
  std::string describe() const;
};

/*! \brief Reads a table file: one hexadecimal value per line, `2^w_in` lines.

  `w_in` follows from the line count, which must be a power of two. Without
  `output_bits` the width is the bit-length of the largest value (at least 1).
  Blank lines and `#` comments are skipped; values may carry a `0x` prefix.
*/
loaded_table read_table_file( std::istream& in, std::optional<unsigned> output_bits = std::nullopt,
                              unsigned max_input_bits = default_max_input_bits );

void write_table_file( std::ostream& out, lookup_table const& table );

} // namespace dclut
