/*!
  \file mask.hpp
  \brief Care / don't-care masks built from observed table inputs

  An address that never occurs in the observation set is a don't care: its
  table value may be replaced during compression. Observed addresses are
  cares and must be reproduced exactly.
*/
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace dclut
{

class care_mask
{
public:
  care_mask() = default;
  explicit care_mask( std::vector<std::uint8_t> flags );

  static care_mask all_care( std::size_t size );
  static care_mask all_dont_care( std::size_t size );

  std::size_t size() const noexcept { return flags_.size(); }
  bool operator[]( std::size_t x ) const noexcept { return flags_[x] != 0; }
  std::span<std::uint8_t const> flags() const noexcept { return flags_; }
  std::size_t count_care() const noexcept;

  bool operator==( care_mask const& ) const = default;

private:
  std::vector<std::uint8_t> flags_; ///< 1 = care, 0 = don't care
};

/*! \brief Marks exactly the observed addresses as cares.

  Duplicates are allowed. Throws `address_error` naming the position in
  `observed` of the first address that does not fit in `w_in` bits.
*/
care_mask mask_from_observations( unsigned w_in, std::span<std::uint64_t const> observed );

double care_fraction( care_mask const& mask ) noexcept;

/*! \brief Reads an observation file.

  One address per line, either `w_in` binary digits or `0x`-prefixed hex.
  Blank lines and `#` comments are skipped. Malformed lines raise
  `parse_error`; addresses that do not fit raise `parse_error` with the
  offending line number.
*/
std::vector<std::uint64_t> read_observations( std::istream& in, unsigned w_in );

/*! \brief Reads a mask file: `expected_size` lines of `0` or `1`. */
care_mask read_mask_file( std::istream& in, std::size_t expected_size );

void write_mask_file( std::ostream& out, care_mask const& mask );

} // namespace dclut
