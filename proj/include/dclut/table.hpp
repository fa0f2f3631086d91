/*!
  \file table.hpp
  \brief Dense lookup tables, decomposed plans and their evaluator

  A decomposed table computes

      hb(x) = (ust[{idx[x_hb], x_lb}] >> rsh[x_hb]) + bias[x_hb]
      T(x)  = {hb(x), lb[x]}

  where `x_hb` are the upper `w_in - w_lb_in` address bits and `x_lb` the
  lower `w_lb_in` bits. `evaluate` is the reference semantics every other
  part of the library is checked against.
*/
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace dclut
{

inline constexpr unsigned default_max_input_bits = 24u;
inline constexpr unsigned max_output_bits = 63u;

/*! \brief Number of bits needed to represent `v` (0 for `v == 0`). */
unsigned bit_length( std::uint64_t v ) noexcept;

/*! \brief Smallest `b` with `2^b >= n` (0 for `n <= 1`). */
unsigned ceil_log2( std::uint64_t n ) noexcept;

/*! \brief A fully specified function from `w_in` address bits to `w_out` data bits. */
class lookup_table
{
public:
  lookup_table() = default;

  /*! \brief Validates sizes and value ranges; throws `usage_error` on violation.

    `max_input_bits` raises or lowers the address-width cap.
  */
  lookup_table( unsigned w_in, unsigned w_out, std::vector<std::uint64_t> values,
                unsigned max_input_bits = default_max_input_bits );

  unsigned input_bits() const noexcept { return w_in_; }
  unsigned output_bits() const noexcept { return w_out_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<std::uint64_t const> values() const noexcept { return values_; }
  std::uint64_t operator[]( std::size_t x ) const noexcept { return values_[x]; }
  std::uint64_t at( std::uint64_t x ) const;

  bool operator==( lookup_table const& ) const = default;

private:
  unsigned w_in_{ 0 };
  unsigned w_out_{ 0 };
  std::vector<std::uint64_t> values_;
};

/*! \brief The table holding bits `[w_lb_out, w_out)` of every entry. */
lookup_table high_bits( lookup_table const& table, unsigned w_lb_out );

/*! \brief Bias + unique-sub-table + index + shift form, plus a plain low-bits table. */
struct decomposition
{
  unsigned w_in{ 0 };
  unsigned w_out{ 0 };
  unsigned w_lb_out{ 0 }; ///< output bits stored plainly in `t_lb`
  unsigned w_lb_in{ 0 };  ///< address bits inside a sub-table
  unsigned w_st{ 0 };     ///< width of unique sub-table entries

  std::vector<std::uint64_t> t_lb; ///< empty when `w_lb_out == 0`
  std::vector<std::uint64_t> t_bias;
  std::vector<std::uint64_t> t_idx;
  std::vector<std::uint64_t> t_rsh;
  std::vector<std::uint64_t> t_ust; ///< unique sub-tables back to back

  std::size_t sub_table_size() const noexcept { return std::size_t{ 1 } << w_lb_in; }
  std::size_t num_sub_tables() const noexcept { return std::size_t{ 1 } << ( w_in - w_lb_in ); }
  std::size_t num_unique() const noexcept { return t_ust.size() / sub_table_size(); }
  unsigned high_bits_width() const noexcept { return w_out - w_lb_out; }

  /*! \brief Throws `invariant_error` if sizes, indices, shifts or widths are inconsistent. */
  void validate() const;

  bool operator==( decomposition const& ) const = default;
};

/*! \brief Configuration a plan originated from; zeros for the plain fallback. */
struct plan_config
{
  unsigned w_lb_in{ 0 };
  unsigned w_lb_out{ 0 };
  std::uint64_t exiguity{ 0 };

  bool operator==( plan_config const& ) const = default;
};

/*! \brief Either a plain table or a decomposition, with its originating configuration. */
class plan
{
public:
  plan() = default;
  explicit plan( lookup_table plain, plan_config config = {} );
  explicit plan( decomposition compressed, plan_config config );

  bool is_plain() const noexcept { return std::holds_alternative<lookup_table>( body_ ); }
  lookup_table const& plain() const { return std::get<lookup_table>( body_ ); }
  decomposition const& compressed() const { return std::get<decomposition>( body_ ); }
  plan_config const& config() const noexcept { return config_; }

  unsigned input_bits() const noexcept;
  unsigned output_bits() const noexcept;

  bool operator==( plan const& ) const = default;

private:
  std::variant<lookup_table, decomposition> body_;
  plan_config config_;
};

/*! \brief Value of `plan` at address `x`; throws `address_error` for `x >= 2^w_in`. */
std::uint64_t evaluate( plan const& p, std::uint64_t x );

/*! \brief Applies `evaluate` to every address. */
lookup_table reconstruction_table( plan const& p );

/*! \brief The plain (undecomposed) plan of `table`. */
plan identity_plan( lookup_table const& table );

/*! \brief A single sub-table spanning the whole table with zero bias and shift. */
decomposition identity_decomposition( lookup_table const& table );

} // namespace dclut
