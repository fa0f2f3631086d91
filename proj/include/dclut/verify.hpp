/*!
  \file verify.hpp
  \brief Brute-force checks of plans against their source table and mask
*/
#pragma once

#include <dclut/mask.hpp>
#include <dclut/table.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dclut
{

struct verify_report
{
  std::vector<std::uint64_t> care_mismatches; ///< care addresses where the plan differs
  std::uint64_t total_checked{ 0 };
  std::uint64_t dont_cares_changed{ 0 }; ///< informational

  bool passed() const noexcept { return care_mismatches.empty(); }
};

/*! \brief Evaluates `p` on every address and compares against `table` on the cares.

  Throws `usage_error` when widths or sizes disagree.
*/
verify_report verify_plan( lookup_table const& table, care_mask const& mask, plan const& p, unsigned threads = 1 );

/*! \brief Bounds enforced by `oracle_min_ust`. */
struct oracle_bounds
{
  unsigned max_input_bits{ 8 };
  unsigned max_sub_table_bits{ 2 };      ///< M <= 4
  std::size_t max_dont_cares{ 12 };
  std::uint64_t max_candidates{ 1u << 20 }; ///< generator completions examined
};

/*! \brief Exact minimum number of unique sub-tables over all don't-care completions.

  Residuals are taken relative to the per-sub-table minimum of `table`
  (don't cares included, as in the compressor) and completed values must lie
  in `[0, 2^w_st)` with `value + bias < 2^w_out`. Solved by exhaustive
  enumeration of generator completions and an exact set cover; throws
  `bounds_error` outside `bounds`.
*/
std::size_t oracle_min_ust( lookup_table const& table, care_mask const& mask, unsigned w_lb_in, unsigned w_st,
                            oracle_bounds const& bounds = {} );

} // namespace dclut
