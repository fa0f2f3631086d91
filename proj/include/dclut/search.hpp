/*!
  \file search.hpp
  \brief Configuration sweep, cost model and plan selection
*/
#pragma once

#include <dclut/dontcare_opt.hpp>
#include <dclut/mask.hpp>
#include <dclut/table.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace dclut
{

struct bit_range
{
  unsigned lo;
  unsigned hi;

  bool operator==( bit_range const& ) const = default;
};

struct search_config
{
  std::optional<bit_range> sub_table_bits; ///< w_lb_in values; default [2, w_in - 2]
  std::optional<bit_range> low_bits;       ///< w_lb_out values; default [0, w_out - 1]
  std::uint64_t exiguity{ default_exiguity };
  bool self_similarity{ true };
  bool higher_bits{ true };
  bool dont_cares{ true };
  unsigned passes{ 1 };
  unsigned threads{ 1 };
  unsigned plut_inputs{ 6 };
};

/*! \brief The `(w_lb_in, w_lb_out)` pairs `compress` will evaluate, in report order.

  Throws `usage_error` if an explicit range is empty or out of bounds.
*/
std::vector<std::pair<unsigned, unsigned>> configurations( lookup_table const& table, search_config const& cfg );

/*! \brief Stored bits per component table. */
struct component_bits
{
  std::uint64_t plain{ 0 };
  std::uint64_t lb{ 0 };
  std::uint64_t bias{ 0 };
  std::uint64_t idx{ 0 };
  std::uint64_t rsh{ 0 };
  std::uint64_t ust{ 0 };

  std::uint64_t total() const noexcept { return plain + lb + bias + idx + rsh + ust; }

  bool operator==( component_bits const& ) const = default;
};

component_bits bit_breakdown( plan const& p );
std::uint64_t cost_bits( plan const& p );

/*! \brief Index width actually stored: 0 when a single unique sub-table exists. */
unsigned index_bits( decomposition const& d ) noexcept;

/*! \brief Shift width actually stored: 0 when every shift is the same. */
unsigned shift_bits( decomposition const& d ) noexcept;

/*! \brief Rough `k`-input P-LUT count, for ranking only.

  Each stored table with `a` address bits and `b` data bits costs
  `b * max(1, 2^(a-k))`; the shifter and the bias adder each add one
  P-LUT per high output bit when present.
*/
std::uint64_t cost_pluts( plan const& p, unsigned k = 6 );

struct config_cost
{
  bool plain{ false };
  unsigned w_lb_in{ 0 };
  unsigned w_lb_out{ 0 };
  component_bits bits;
  std::uint64_t total_bits{ 0 };
  std::uint64_t pluts{ 0 };
  std::size_t ust_before{ 0 }; ///< unique sub-tables after greedy selection
  std::size_t ust_after{ 0 };  ///< ... and after don't-care elimination
  bool reduced_kept{ false };  ///< the don't-care-optimized decomposition was cheaper and kept

  bool operator==( config_cost const& ) const = default;
};

struct cost_report
{
  std::vector<config_cost> configs; ///< entry 0 is the plain table
  std::size_t chosen{ 0 };

  bool operator==( cost_report const& ) const = default;
};

struct compress_result
{
  plan chosen;
  cost_report report;
};

/*! \brief Evaluates every configuration plus the plain table and returns the cheapest.

  Ordering: stored bits, then estimated P-LUTs, then smaller `w_lb_in`, then
  smaller `w_lb_out`. Per configuration the don't-care-optimized
  decomposition replaces the greedy one only when strictly cheaper.
  Configurations run on `cfg.threads` workers; the result does not depend on
  the schedule.
*/
compress_result compress( lookup_table const& table, care_mask const& mask, search_config const& cfg );

/*! \brief Candidate decompositions of one configuration, before and after don't-care elimination. */
struct configuration_result
{
  decomposition greedy;
  std::optional<decomposition> reduced; ///< present when elimination removed a unique sub-table
  std::size_t ust_before{ 0 };
  std::size_t ust_after{ 0 };
};

configuration_result run_configuration( lookup_table const& table, care_mask const& mask, unsigned w_lb_in,
                                        unsigned w_lb_out, search_config const& cfg );

} // namespace dclut
