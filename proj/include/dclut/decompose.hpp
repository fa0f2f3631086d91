/*!
  \file decompose.hpp
  \brief Bias extraction, shift-similarity detection and unique sub-table selection

  A table is cut into `n` consecutive sub-tables of `M = 2^w_lb_in` entries.
  Each sub-table's minimum becomes its bias; the residuals are compared
  pairwise: `ST_i` generates `ST_j` at shift `t` when `ST_i[k] >> t == ST_j[k]`
  for every `k`. A greedy cover then picks the unique sub-tables that must
  be stored; every other sub-table is regenerated from one of them.
*/
#pragma once

#include <dclut/table.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace dclut
{

/*! \brief `n` sub-tables of `2^w_lb_in` entries stored back to back. */
struct sub_tables
{
  unsigned w_lb_in{ 0 };
  std::vector<std::uint64_t> values;

  std::size_t entries() const noexcept { return std::size_t{ 1 } << w_lb_in; }
  std::size_t count() const noexcept { return values.size() >> w_lb_in; }

  std::span<std::uint64_t const> operator[]( std::size_t i ) const noexcept
  {
    return std::span<std::uint64_t const>( values ).subspan( i * entries(), entries() );
  }
  std::span<std::uint64_t> mut( std::size_t i ) noexcept
  {
    return std::span<std::uint64_t>( values ).subspan( i * entries(), entries() );
  }

  bool operator==( sub_tables const& ) const = default;
};

struct bias_split
{
  sub_tables residuals;
  std::vector<std::uint64_t> bias;
  unsigned w_st{ 0 }; ///< bit-length of the largest residual
};

/*! \brief Splits `table` into sub-tables and subtracts each sub-table's minimum.

  Requires `1 <= w_lb_in < w_in`.
*/
bias_split split_bias( lookup_table const& table, unsigned w_lb_in );

/*! \brief `generator >> t == target` elementwise? */
bool generates( std::span<std::uint64_t const> generator, std::span<std::uint64_t const> target, unsigned shift ) noexcept;

struct similarity_edge
{
  std::size_t target;
  unsigned shift;

  bool operator==( similarity_edge const& ) const = default;
};

struct dependent
{
  std::size_t index;
  unsigned shift;

  bool operator==( dependent const& ) const = default;
};

/*! \brief Similarity matrix, similarity vector and the unique sub-table selection.

  The matrix is stored by rows: `rows[i]` lists every `j` with `SM[i][j] = 1`
  in ascending order together with the smallest shift `SM_rsh[i][j]`.
  `sv[i]` is the row sum, i.e. how many sub-tables `ST_i` can generate
  (itself included). Both describe the residuals the state was built from.

  After selection, `i_ust` holds the unique sub-tables in selection order and
  `deps[u]` the other sub-tables regenerated from `u`, ascending by index.
  Every sub-table is in exactly one of `i_ust` or a `deps` list.
*/
struct similarity_state
{
  std::size_t n{ 0 };
  std::vector<std::vector<similarity_edge>> rows;
  std::vector<std::size_t> sv;
  std::vector<std::size_t> i_ust;
  std::map<std::size_t, std::vector<dependent>> deps;

  bool similar( std::size_t i, std::size_t j ) const noexcept { return shift( i, j ).has_value(); }
  std::optional<unsigned> shift( std::size_t i, std::size_t j ) const noexcept;

  /*! \brief Number of sub-tables regenerated from unique `u`, counting `u` itself. */
  std::size_t dependency_count( std::size_t u ) const;

  bool is_unique( std::size_t u ) const noexcept;

  bool operator==( similarity_state const& ) const = default;
};

/*! \brief Builds the shift-similarity relation for shifts in `[0, w_st]`.

  Rows are computed independently; `threads > 1` splits them across
  workers with an identical result.
*/
similarity_state similarity_matrix( sub_tables const& residuals, unsigned w_st, unsigned threads = 1 );

/*! \brief Greedy cover: repeatedly take the sub-table generating the most
  remaining sub-tables (lowest index on ties) and retire everything it generates.
*/
similarity_state select_unique( similarity_state state );

/*! \brief A selection in which every sub-table is its own unique sub-table. */
similarity_state trivial_selection( std::size_t n );

/*! \brief Builds the decomposition described by a completed selection.

  `table` supplies the plain low bits; `split` holds the (possibly rewritten)
  high-bit residuals and biases. Unique sub-tables are stored in `i_ust`
  order. Throws `invariant_error` if a dependent does not match its generator.
*/
decomposition assemble( lookup_table const& table, unsigned w_lb_in, unsigned w_lb_out, bias_split const& split,
                        similarity_state const& state );

} // namespace dclut
