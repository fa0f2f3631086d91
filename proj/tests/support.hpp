#pragma once

// Test-side reference implementations. None of these call into the library's
// algorithms; they recompute everything the slow and obvious way.

#include <dclut/mask.hpp>
#include <dclut/table.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace dclut::test
{

/* reference evaluation of a decomposition, written straight from the formula */
inline std::uint64_t ref_eval( decomposition const& d, std::uint64_t x )
{
  auto const m = std::uint64_t{ 1 } << d.w_lb_in;
  auto const x_hb = x >> d.w_lb_in;
  auto const x_lb = x & ( m - 1 );
  auto const ust = d.t_ust[d.t_idx[x_hb] * m + x_lb];
  auto const hb = ( ust >> d.t_rsh[x_hb] ) + d.t_bias[x_hb];
  auto const lb = d.w_lb_out ? d.t_lb[x] : 0u;
  return ( hb << d.w_lb_out ) | lb;
}

inline std::uint64_t ref_eval( plan const& p, std::uint64_t x )
{
  return p.is_plain() ? p.plain()[x] : ref_eval( p.compressed(), x );
}

/* smallest t in [0, w_st] with gen >> t == target, elementwise */
inline std::optional<unsigned> ref_shift( std::vector<std::uint64_t> const& gen, std::vector<std::uint64_t> const& target,
                                          unsigned w_st )
{
  for ( unsigned t = 0; t <= w_st; ++t )
  {
    bool ok = true;
    for ( std::size_t k = 0; k < gen.size() && ok; ++k )
    {
      ok = ( t >= 64 ? 0 : gen[k] >> t ) == target[k];
    }
    if ( ok )
      return t;
  }
  return std::nullopt;
}

/* minimum number of sub-tables that, together with their shifts, regenerate all of them */
inline std::size_t ref_min_cover( std::vector<std::vector<std::uint64_t>> const& sts, unsigned w_st )
{
  auto const n = sts.size();
  std::vector<std::uint64_t> covers( n, 0 );
  for ( std::size_t i = 0; i < n; ++i )
    for ( std::size_t j = 0; j < n; ++j )
      if ( ref_shift( sts[i], sts[j], w_st ) )
        covers[i] |= std::uint64_t{ 1 } << j;
  auto const all = ( std::uint64_t{ 1 } << n ) - 1;
  std::size_t best = n;
  for ( std::uint64_t s = 1; s <= all; ++s )
  {
    auto const size = static_cast<std::size_t>( __builtin_popcountll( s ) );
    if ( size >= best )
      continue;
    std::uint64_t covered = 0;
    for ( std::size_t i = 0; i < n; ++i )
      if ( s >> i & 1 )
        covered |= covers[i];
    if ( covered == all )
      best = size;
  }
  return best;
}

/* brute force over every completion of the don't cares; bias is the per-sub-table min of the given values */
inline std::size_t ref_min_ust( lookup_table const& table, care_mask const& mask, unsigned w_lb_in, unsigned w_st )
{
  auto const m = std::size_t{ 1 } << w_lb_in;
  auto const n = table.size() / m;
  std::vector<std::vector<std::uint64_t>> sts( n, std::vector<std::uint64_t>( m ) );
  std::vector<std::uint64_t> bias( n );
  std::vector<std::size_t> free_pos;
  for ( std::size_t i = 0; i < n; ++i )
  {
    bias[i] = *std::min_element( table.values().begin() + i * m, table.values().begin() + ( i + 1 ) * m );
    for ( std::size_t k = 0; k < m; ++k )
    {
      sts[i][k] = table[i * m + k] - bias[i];
      if ( !mask[i * m + k] )
        free_pos.push_back( i * m + k );
    }
  }
  auto const w_out_cap = std::uint64_t{ 1 } << table.output_bits();
  auto domain = [&]( std::size_t pos ) {
    auto const b = bias[pos / m];
    return std::min<std::uint64_t>( std::uint64_t{ 1 } << w_st, w_out_cap - b );
  };
  std::size_t best = n;
  std::vector<std::uint64_t> digit( free_pos.size(), 0 );
  while ( true )
  {
    for ( std::size_t f = 0; f < free_pos.size(); ++f )
      sts[free_pos[f] / m][free_pos[f] % m] = digit[f];
    best = std::min( best, ref_min_cover( sts, w_st ) );
    std::size_t f = 0;
    for ( ; f < free_pos.size(); ++f )
    {
      if ( ++digit[f] < domain( free_pos[f] ) )
        break;
      digit[f] = 0;
    }
    if ( f == free_pos.size() )
      break;
  }
  return best;
}

/* the shifted four-sub-table family at table level: ST_1 = ST_2 >> 1, ST_3 = ST_2 >> 3,
   and ST_0 = ST_2 >> 2 once its don't care (address 1) is rewritten to 1 */
struct family
{
  static constexpr std::uint64_t dont_care_value = 3;
  static constexpr std::uint64_t forced_value = 1;
  static constexpr std::size_t dont_care_address = 1;

  static lookup_table table()
  {
    std::vector<std::uint64_t> const residuals{ 0, dont_care_value, 2, 3, 0, 3, 4, 7, 0, 6, 8, 15, 0, 0, 1, 1 };
    std::vector<std::uint64_t> const bias{ 3, 10, 0, 16 };
    std::vector<std::uint64_t> values( 16 );
    for ( std::size_t x = 0; x < 16; ++x )
      values[x] = residuals[x] + bias[x / 4];
    return lookup_table( 4, 5, values );
  }

  static care_mask mask()
  {
    std::vector<std::uint8_t> flags( 16, 1 );
    flags[dont_care_address] = 0;
    return care_mask( flags );
  }
};

inline lookup_table make_random_table( unsigned w_in, unsigned w_out, std::mt19937_64& rng )
{
  std::uniform_int_distribution<std::uint64_t> v( 0, ( std::uint64_t{ 1 } << w_out ) - 1 );
  std::vector<std::uint64_t> values( std::size_t{ 1 } << w_in );
  for ( auto& x : values )
    x = v( rng );
  return lookup_table( w_in, w_out, values );
}

inline care_mask make_random_mask( std::size_t size, double dc, std::mt19937_64& rng )
{
  std::bernoulli_distribution d( dc );
  std::vector<std::uint8_t> flags( size );
  for ( auto& f : flags )
    f = d( rng ) ? 0 : 1;
  return care_mask( flags );
}

} // namespace dclut::test
