#include <dclut/decompose.hpp>

#include <dclut/errors.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <unordered_map>

namespace dclut
{

bias_split split_bias( lookup_table const& table, unsigned w_lb_in )
{
  if ( w_lb_in < 1 || w_lb_in >= table.input_bits() )
  {
    throw usage_error( "sub-table address width " + std::to_string( w_lb_in ) + " outside [1, " +
                       std::to_string( table.input_bits() - 1 ) + "]" );
  }
  bias_split split;
  split.residuals.w_lb_in = w_lb_in;
  split.residuals.values.assign( table.values().begin(), table.values().end() );

  auto const n = split.residuals.count();
  split.bias.resize( n );
  std::uint64_t largest = 0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto st = split.residuals.mut( i );
    auto const lo = *std::min_element( st.begin(), st.end() );
    split.bias[i] = lo;
    for ( auto& v : st )
    {
      v -= lo;
      largest = std::max( largest, v );
    }
  }
  split.w_st = bit_length( largest );
  return split;
}

bool generates( std::span<std::uint64_t const> generator, std::span<std::uint64_t const> target, unsigned shift ) noexcept
{
  for ( std::size_t k = 0; k < target.size(); ++k )
  {
    if ( ( shift >= 64 ? 0 : generator[k] >> shift ) != target[k] )
    {
      return false;
    }
  }
  return true;
}

std::optional<unsigned> similarity_state::shift( std::size_t i, std::size_t j ) const noexcept
{
  if ( i >= rows.size() )
  {
    return std::nullopt;
  }
  auto const& row = rows[i];
  auto it = std::lower_bound( row.begin(), row.end(), j,
                              []( similarity_edge const& e, std::size_t target ) { return e.target < target; } );
  if ( it == row.end() || it->target != j )
  {
    return std::nullopt;
  }
  return it->shift;
}

std::size_t similarity_state::dependency_count( std::size_t u ) const
{
  auto it = deps.find( u );
  return it == deps.end() ? 1u : it->second.size() + 1u;
}

bool similarity_state::is_unique( std::size_t u ) const noexcept
{
  return std::find( i_ust.begin(), i_ust.end(), u ) != i_ust.end();
}

namespace
{

struct content_hash
{
  std::size_t operator()( std::vector<std::uint64_t> const& v ) const noexcept
  {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for ( auto x : v )
    {
      h ^= x + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 );
    }
    return static_cast<std::size_t>( h );
  }
};

} // namespace

similarity_state similarity_matrix( sub_tables const& residuals, unsigned w_st, unsigned threads )
{
  auto const n = residuals.count();
  auto const m = residuals.entries();

  /* group identical sub-tables so each (generator, shift) needs one lookup */
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, content_hash> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for ( std::size_t j = 0; j < n; ++j )
  {
    auto st = residuals[j];
    std::vector<std::uint64_t> key( st.begin(), st.end() );
    auto [it, inserted] = group_of.emplace( std::move( key ), groups.size() );
    if ( inserted )
    {
      groups.emplace_back();
    }
    groups[it->second].push_back( j );
  }

  similarity_state state;
  state.n = n;
  state.rows.resize( n );

  auto build_rows = [&]( std::size_t begin, std::size_t end ) {
    std::vector<std::uint64_t> shifted( m );
    std::vector<std::size_t> seen;
    for ( std::size_t i = begin; i < end; ++i )
    {
      auto st = residuals[i];
      auto& row = state.rows[i];
      seen.clear();
      for ( unsigned t = 0; t <= w_st; ++t )
      {
        bool all_zero = true;
        for ( std::size_t k = 0; k < m; ++k )
        {
          shifted[k] = t >= 64 ? 0 : st[k] >> t;
          all_zero = all_zero && shifted[k] == 0;
        }
        auto it = group_of.find( shifted );
        if ( it != group_of.end() && std::find( seen.begin(), seen.end(), it->second ) == seen.end() )
        {
          seen.push_back( it->second );
          for ( auto j : groups[it->second] )
          {
            row.push_back( { j, t } );
          }
        }
        if ( all_zero )
        {
          break;
        }
      }
      std::sort( row.begin(), row.end(), []( auto const& a, auto const& b ) { return a.target < b.target; } );
    }
  };

  auto const workers = std::max<std::size_t>( 1, std::min<std::size_t>( threads, n / 64 ) );
  if ( workers == 1 )
  {
    build_rows( 0, n );
  }
  else
  {
    std::vector<std::jthread> pool;
    auto const chunk = ( n + workers - 1 ) / workers;
    for ( std::size_t w = 0; w < workers; ++w )
    {
      auto const begin = std::min( n, w * chunk );
      auto const end = std::min( n, begin + chunk );
      pool.emplace_back( build_rows, begin, end );
    }
  }

  state.sv.resize( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    state.sv[i] = state.rows[i].size();
  }
  return state;
}

similarity_state select_unique( similarity_state state )
{
  auto const n = state.n;
  std::vector<std::vector<std::size_t>> cols( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( auto const& e : state.rows[i] )
    {
      cols[e.target].push_back( i );
    }
  }

  std::vector<std::size_t> remaining = state.sv;
  std::vector<bool> alive( n, true );
  std::size_t left = n;

  state.i_ust.clear();
  state.deps.clear();

  auto retire = [&]( std::size_t r ) {
    alive[r] = false;
    --left;
    for ( auto i : cols[r] )
    {
      --remaining[i];
    }
  };

  while ( left > 0 )
  {
    std::size_t best = n;
    for ( std::size_t i = 0; i < n; ++i )
    {
      if ( alive[i] && ( best == n || remaining[i] > remaining[best] ) )
      {
        best = i;
      }
    }

    state.i_ust.push_back( best );
    auto& dependents = state.deps[best];
    for ( auto const& e : state.rows[best] )
    {
      if ( e.target != best && alive[e.target] )
      {
        dependents.push_back( { e.target, e.shift } );
      }
    }
    retire( best );
    for ( auto const& d : dependents )
    {
      retire( d.index );
    }
  }
  return state;
}

similarity_state trivial_selection( std::size_t n )
{
  similarity_state state;
  state.n = n;
  for ( std::size_t i = 0; i < n; ++i )
  {
    state.i_ust.push_back( i );
    state.deps[i];
  }
  return state;
}

decomposition assemble( lookup_table const& table, unsigned w_lb_in, unsigned w_lb_out, bias_split const& split,
                        similarity_state const& state )
{
  auto const& residuals = split.residuals;
  auto const n = residuals.count();
  auto const m = residuals.entries();
  if ( residuals.w_lb_in != w_lb_in || state.n != n || split.bias.size() != n ||
       residuals.values.size() != table.size() )
  {
    throw invariant_error( "assemble: split, state and table sizes disagree" );
  }

  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> slot_of( n, none );
  std::vector<unsigned> shift_of( n, 0 );

  for ( std::size_t pos = 0; pos < state.i_ust.size(); ++pos )
  {
    auto const u = state.i_ust[pos];
    if ( u >= n || slot_of[u] != none )
    {
      throw invariant_error( "assemble: unique sub-table " + std::to_string( u ) + " listed twice or out of range" );
    }
    slot_of[u] = pos;
  }
  for ( std::size_t pos = 0; pos < state.i_ust.size(); ++pos )
  {
    auto it = state.deps.find( state.i_ust[pos] );
    if ( it == state.deps.end() )
    {
      continue;
    }
    for ( auto const& d : it->second )
    {
      if ( d.index >= n || slot_of[d.index] != none )
      {
        throw invariant_error( "assemble: sub-table " + std::to_string( d.index ) + " assigned twice" );
      }
      slot_of[d.index] = pos;
      shift_of[d.index] = d.shift;
    }
  }
  if ( std::find( slot_of.begin(), slot_of.end(), none ) != slot_of.end() )
  {
    throw invariant_error( "assemble: selection does not cover every sub-table" );
  }

  decomposition d;
  d.w_in = table.input_bits();
  d.w_out = table.output_bits();
  d.w_lb_in = w_lb_in;
  d.w_lb_out = w_lb_out;

  d.t_ust.reserve( state.i_ust.size() * m );
  std::uint64_t largest = 0;
  for ( auto u : state.i_ust )
  {
    auto st = residuals[u];
    d.t_ust.insert( d.t_ust.end(), st.begin(), st.end() );
    largest = std::max( largest, *std::max_element( st.begin(), st.end() ) );
  }
  /* rewrites may have lowered the largest stored residual */
  d.w_st = bit_length( largest );

  d.t_bias = split.bias;
  d.t_idx.resize( n );
  d.t_rsh.resize( n );
  for ( std::size_t j = 0; j < n; ++j )
  {
    auto const shift = std::min( shift_of[j], d.w_st );
    auto const unique = std::span<std::uint64_t const>( d.t_ust ).subspan( slot_of[j] * m, m );
    if ( !generates( unique, residuals[j], shift ) )
    {
      throw invariant_error( "assemble: sub-table " + std::to_string( j ) + " is not generated by its unique sub-table" );
    }
    d.t_idx[j] = slot_of[j];
    d.t_rsh[j] = shift;
  }

  if ( w_lb_out > 0 )
  {
    auto const low_mask = ( std::uint64_t{ 1 } << w_lb_out ) - 1;
    d.t_lb.resize( table.size() );
    for ( std::size_t x = 0; x < table.size(); ++x )
    {
      d.t_lb[x] = table[x] & low_mask;
    }
  }
  d.validate();
  return d;
}

} // namespace dclut
