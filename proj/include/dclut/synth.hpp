/*!
  \file synth.hpp
  \brief Seeded generators for test tables and masks
*/
#pragma once

#include <dclut/mask.hpp>
#include <dclut/table.hpp>

#include <cstdint>
#include <random>

namespace dclut
{

/*! \brief Uniformly random values. */
lookup_table random_table( unsigned w_in, unsigned w_out, std::mt19937_64& rng );

/*! \brief Each address is a don't care with probability `dont_care_fraction`. */
care_mask random_mask( std::size_t size, double dont_care_fraction, std::mt19937_64& rng );

struct planted_options
{
  unsigned w_in{ 10 };
  unsigned w_out{ 8 };
  unsigned w_lb_in{ 3 };
  unsigned generators{ 4 };         ///< distinct base sub-tables
  double dont_care_fraction{ 0.6 }; ///< share of addresses that are don't cares
};

struct planted_instance
{
  lookup_table table;
  care_mask mask;
};

/*! \brief A table whose sub-tables are right shifts of a few random generators.

  Every sub-table is `base >> shift` plus a random bias, with the generators
  spanning the full residual range. Don't-care entries are then overwritten
  with random values, which hides the structure from an exact-match search
  while leaving it recoverable through the don't cares.
*/
planted_instance planted_table( planted_options const& options, std::mt19937_64& rng );

} // namespace dclut
