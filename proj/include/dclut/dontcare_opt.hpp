/*!
  \file dontcare_opt.hpp
  \brief Unique sub-table elimination by rewriting don't-care residuals

  Starting from a completed greedy selection, each unique sub-table with few
  dependents is offered to the other unique sub-tables: if its unfrozen
  entries can be rewritten so that it becomes a right shift of one of them,
  and every sub-table that depended on it can be regenerated from the
  remaining unique sub-tables, the change is committed and the unique count
  drops by one. Otherwise every provisional change is rolled back.

  Entries of care addresses start frozen. Entries of every sub-table taking
  part in a committed match (target and generator) are frozen afterwards and
  never change again.
*/
#pragma once

#include <dclut/decompose.hpp>
#include <dclut/mask.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dclut
{

inline constexpr std::uint64_t default_exiguity = 250u;

/*! \brief Per residual entry: 1 = value may no longer change. */
struct freeze_mask
{
  std::vector<std::uint8_t> frozen;

  /*! \brief Cares are born frozen. */
  static freeze_mask from_care_mask( care_mask const& mask );

  bool operator==( freeze_mask const& ) const = default;
};

struct match_result
{
  unsigned shift;
  std::vector<std::uint64_t> rewritten;

  bool operator==( match_result const& ) const = default;
};

/*! \brief Finds the smallest shift `t` in `[0, w_st]` making `target` a shift of `generator`.

  Frozen target entries must already equal `generator[k] >> t`; unfrozen ones
  are rewritten to that value, provided `value + bias` still fits in
  `w_out_hb` bits. The generator is never modified.
*/
std::optional<match_result> match_with_dontcares( std::span<std::uint64_t const> target,
                                                  std::span<std::uint8_t const> target_frozen,
                                                  std::span<std::uint64_t const> generator, unsigned w_st,
                                                  unsigned w_out_hb, std::uint64_t bias );

struct reduce_options
{
  std::uint64_t exiguity{ default_exiguity };
  unsigned passes{ 1 };
};

/*! \brief Stateful optimizer for one configuration.

  Keeps the residuals, the freeze mask and the selection together so that a
  failed attempt can be undone from a log of original values.
*/
class dontcare_optimizer
{
public:
  dontcare_optimizer( similarity_state state, sub_tables residuals, freeze_mask freeze,
                      std::vector<std::uint64_t> bias, unsigned w_st, unsigned w_out_hb );

  /*! \brief Tries to turn unique sub-table `candidate` into a dependent.

    Ignores the exiguity gate. Returns false, with all state unchanged, if
    `candidate` is not unique, has no unfrozen entry, or no generator admits
    both the match and the re-homing of all its dependents.
  */
  bool try_eliminate( std::size_t candidate );

  /*! \brief One traversal of the unique list, fewest dependents first. Returns eliminations. */
  std::size_t run_pass( std::uint64_t exiguity );

  similarity_state const& state() const noexcept { return state_; }
  sub_tables const& residuals() const noexcept { return residuals_; }
  freeze_mask const& freeze() const noexcept { return freeze_; }

  similarity_state take_state() && { return std::move( state_ ); }
  sub_tables take_residuals() && { return std::move( residuals_ ); }
  freeze_mask take_freeze() && { return std::move( freeze_ ); }

private:
  struct undo_entry
  {
    std::size_t position;
    std::uint64_t value;
    std::uint8_t frozen;
  };

  std::vector<std::size_t> generators_excluding( std::size_t candidate ) const;
  bool has_unfrozen( std::size_t sub_table ) const;
  std::optional<unsigned> rehome( std::size_t sub_table, std::vector<std::size_t> const& generators,
                                  std::size_t& chosen );
  void write( std::size_t position, std::uint64_t value );
  void freeze_sub_table( std::size_t sub_table );
  void apply( std::size_t target, match_result const& match );
  void rollback( std::size_t mark );

  similarity_state state_;
  sub_tables residuals_;
  freeze_mask freeze_;
  std::vector<std::uint64_t> bias_;
  unsigned w_st_;
  unsigned w_out_hb_;
  std::vector<undo_entry> undo_;
};

struct reduce_result
{
  similarity_state state;
  sub_tables residuals;
  freeze_mask freeze;
};

/*! \brief Runs `options.passes` traversals of the unique list.

  Only unique sub-tables whose dependency count (self included) is at most
  `options.exiguity` are attempted. `|i_ust|` never grows.
*/
reduce_result reduce_unique( similarity_state state, sub_tables residuals, freeze_mask freeze,
                             reduce_options const& options, unsigned w_st, unsigned w_out_hb,
                             std::span<std::uint64_t const> bias );

} // namespace dclut
