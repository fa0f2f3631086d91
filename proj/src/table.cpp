#include <dclut/table.hpp>

#include <dclut/errors.hpp>

#include <bit>
#include <string>

namespace dclut
{

unsigned bit_length( std::uint64_t v ) noexcept
{
  return static_cast<unsigned>( std::bit_width( v ) );
}

unsigned ceil_log2( std::uint64_t n ) noexcept
{
  return n <= 1 ? 0u : bit_length( n - 1 );
}

lookup_table::lookup_table( unsigned w_in, unsigned w_out, std::vector<std::uint64_t> values, unsigned max_input_bits )
    : w_in_( w_in ), w_out_( w_out ), values_( std::move( values ) )
{
  if ( w_in < 1 || w_in > max_input_bits )
  {
    throw usage_error( "input width " + std::to_string( w_in ) + " outside [1, " + std::to_string( max_input_bits ) + "]" );
  }
  if ( w_out < 1 || w_out > max_output_bits )
  {
    throw usage_error( "output width " + std::to_string( w_out ) + " outside [1, " + std::to_string( max_output_bits ) + "]" );
  }
  if ( values_.size() != ( std::size_t{ 1 } << w_in ) )
  {
    throw usage_error( "table has " + std::to_string( values_.size() ) + " entries, expected 2^" + std::to_string( w_in ) );
  }
  auto const limit = std::uint64_t{ 1 } << w_out;
  for ( std::size_t x = 0; x < values_.size(); ++x )
  {
    if ( values_[x] >= limit )
    {
      throw usage_error( "value at address " + std::to_string( x ) + " does not fit in " + std::to_string( w_out ) + " bits" );
    }
  }
}

std::uint64_t lookup_table::at( std::uint64_t x ) const
{
  if ( x >= values_.size() )
  {
    throw address_error( "address " + std::to_string( x ) + " out of range for " + std::to_string( w_in_ ) + "-bit table" );
  }
  return values_[x];
}

lookup_table high_bits( lookup_table const& table, unsigned w_lb_out )
{
  if ( w_lb_out >= table.output_bits() )
  {
    throw usage_error( "low-bit split must leave at least one high bit" );
  }
  std::vector<std::uint64_t> hb( table.values().begin(), table.values().end() );
  for ( auto& v : hb )
  {
    v >>= w_lb_out;
  }
  return lookup_table( table.input_bits(), table.output_bits() - w_lb_out, std::move( hb ), table.input_bits() );
}

void decomposition::validate() const
{
  auto fail = []( std::string const& msg ) { throw invariant_error( "decomposition: " + msg ); };

  if ( w_in < 1 || w_in > 62 )
    fail( "bad input width" );
  if ( w_out < 1 || w_out > max_output_bits )
    fail( "bad output width" );
  if ( w_lb_out >= w_out )
    fail( "low-bit width must be below output width" );
  if ( w_lb_in > w_in )
    fail( "sub-table address width exceeds input width" );
  if ( w_st > high_bits_width() )
    fail( "sub-table entry width exceeds high-bit width" );

  auto const n = num_sub_tables();
  auto const m = sub_table_size();
  if ( t_bias.size() != n || t_idx.size() != n || t_rsh.size() != n )
    fail( "bias/index/shift tables must have one entry per sub-table" );
  if ( t_ust.empty() || t_ust.size() % m != 0 )
    fail( "unique sub-table storage is not a whole number of sub-tables" );
  if ( w_lb_out == 0 ? !t_lb.empty() : t_lb.size() != ( std::size_t{ 1 } << w_in ) )
    fail( "low-bits table size mismatch" );

  auto const hb_limit = std::uint64_t{ 1 } << high_bits_width();
  auto const lb_limit = std::uint64_t{ 1 } << w_lb_out;
  auto const st_limit = std::uint64_t{ 1 } << w_st;
  auto const unique = num_unique();
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( t_bias[i] >= hb_limit )
      fail( "bias " + std::to_string( i ) + " too wide" );
    if ( t_idx[i] >= unique )
      fail( "index " + std::to_string( i ) + " names a missing unique sub-table" );
    if ( t_rsh[i] > w_st )
      fail( "shift " + std::to_string( i ) + " exceeds sub-table width" );
  }
  for ( auto v : t_ust )
    if ( v >= st_limit )
      fail( "unique sub-table entry too wide" );
  for ( auto v : t_lb )
    if ( v >= lb_limit )
      fail( "low-bits entry too wide" );

  // the reconstructed high part must fit as well
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto const base = t_idx[i] * m;
    for ( std::size_t k = 0; k < m; ++k )
    {
      if ( ( t_ust[base + k] >> t_rsh[i] ) + t_bias[i] >= hb_limit )
        fail( "sub-table " + std::to_string( i ) + " overflows the high-bit width" );
    }
  }
}

plan::plan( lookup_table plain, plan_config config )
    : body_( std::move( plain ) ), config_( config )
{
}

plan::plan( decomposition compressed, plan_config config )
    : body_( std::move( compressed ) ), config_( config )
{
  std::get<decomposition>( body_ ).validate();
}

unsigned plan::input_bits() const noexcept
{
  return is_plain() ? plain().input_bits() : compressed().w_in;
}

unsigned plan::output_bits() const noexcept
{
  return is_plain() ? plain().output_bits() : compressed().w_out;
}

namespace
{

std::uint64_t evaluate_unchecked( decomposition const& d, std::uint64_t x )
{
  auto const x_hb = x >> d.w_lb_in;
  auto const x_lb = x & ( d.sub_table_size() - 1 );
  auto const st = d.t_ust[d.t_idx[x_hb] * d.sub_table_size() + x_lb];
  auto const hb = ( st >> d.t_rsh[x_hb] ) + d.t_bias[x_hb];
  auto const lb = d.w_lb_out == 0 ? 0u : d.t_lb[x];
  return ( hb << d.w_lb_out ) | lb;
}

} // namespace

std::uint64_t evaluate( plan const& p, std::uint64_t x )
{
  auto const w_in = p.input_bits();
  if ( x >= ( std::uint64_t{ 1 } << w_in ) )
  {
    throw address_error( "address " + std::to_string( x ) + " out of range for " + std::to_string( w_in ) + "-bit plan" );
  }
  if ( p.is_plain() )
  {
    return p.plain()[x];
  }
  return evaluate_unchecked( p.compressed(), x );
}

lookup_table reconstruction_table( plan const& p )
{
  if ( p.is_plain() )
  {
    return p.plain();
  }
  auto const& d = p.compressed();
  std::vector<std::uint64_t> values( std::size_t{ 1 } << d.w_in );
  for ( std::size_t x = 0; x < values.size(); ++x )
  {
    values[x] = evaluate_unchecked( d, x );
  }
  return lookup_table( d.w_in, d.w_out, std::move( values ), d.w_in );
}

plan identity_plan( lookup_table const& table )
{
  return plan( table );
}

decomposition identity_decomposition( lookup_table const& table )
{
  decomposition d;
  d.w_in = table.input_bits();
  d.w_out = table.output_bits();
  d.w_lb_in = table.input_bits();
  d.w_st = table.output_bits();
  d.t_bias = { 0 };
  d.t_idx = { 0 };
  d.t_rsh = { 0 };
  d.t_ust.assign( table.values().begin(), table.values().end() );
  return d;
}

} // namespace dclut
