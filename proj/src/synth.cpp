#include <dclut/synth.hpp>

#include <dclut/errors.hpp>

#include <algorithm>

namespace dclut
{

lookup_table random_table( unsigned w_in, unsigned w_out, std::mt19937_64& rng )
{
  std::uniform_int_distribution<std::uint64_t> value( 0, ( std::uint64_t{ 1 } << w_out ) - 1 );
  std::vector<std::uint64_t> values( std::size_t{ 1 } << w_in );
  for ( auto& v : values )
  {
    v = value( rng );
  }
  return lookup_table( w_in, w_out, std::move( values ) );
}

care_mask random_mask( std::size_t size, double dont_care_fraction, std::mt19937_64& rng )
{
  std::bernoulli_distribution dont_care( std::clamp( dont_care_fraction, 0.0, 1.0 ) );
  std::vector<std::uint8_t> flags( size );
  for ( auto& f : flags )
  {
    f = dont_care( rng ) ? 0u : 1u;
  }
  return care_mask( std::move( flags ) );
}

planted_instance planted_table( planted_options const& o, std::mt19937_64& rng )
{
  if ( o.w_lb_in < 1 || o.w_lb_in >= o.w_in || o.w_out < 2 || o.generators == 0 )
  {
    throw usage_error( "planted_table: need 1 <= w_lb_in < w_in, w_out >= 2 and at least one generator" );
  }
  auto const m = std::size_t{ 1 } << o.w_lb_in;
  auto const n = std::size_t{ 1 } << ( o.w_in - o.w_lb_in );
  auto const w_res = o.w_out - 1; // leave headroom for the bias
  auto const res_max = ( std::uint64_t{ 1 } << w_res ) - 1;

  std::uniform_int_distribution<std::uint64_t> residual( 0, res_max );
  std::vector<std::vector<std::uint64_t>> bases( o.generators, std::vector<std::uint64_t>( m ) );
  for ( auto& base : bases )
  {
    for ( auto& v : base )
    {
      v = residual( rng );
    }
    base[0] = 0;       // minimum stays at zero after any shift
    base[m - 1] = res_max; // full width so shifts are distinguishable
  }

  std::uniform_int_distribution<std::size_t> pick( 0, o.generators - 1 );
  std::uniform_int_distribution<unsigned> shift( 0, std::max( 1u, w_res / 2 ) );
  std::uniform_int_distribution<std::uint64_t> bias( 0, ( std::uint64_t{ 1 } << ( o.w_out - 1 ) ) - 1 );

  std::vector<std::uint64_t> values( n * m );
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto const& base = bases[pick( rng )];
    auto const t = shift( rng );
    auto const b = bias( rng );
    for ( std::size_t k = 0; k < m; ++k )
    {
      values[i * m + k] = ( base[k] >> t ) + b;
    }
  }

  auto mask = random_mask( values.size(), o.dont_care_fraction, rng );
  std::uniform_int_distribution<std::uint64_t> noise( 0, ( std::uint64_t{ 1 } << o.w_out ) - 1 );
  for ( std::size_t x = 0; x < values.size(); ++x )
  {
    if ( !mask[x] )
    {
      values[x] = noise( rng );
    }
  }
  return { lookup_table( o.w_in, o.w_out, std::move( values ) ), std::move( mask ) };
}

} // namespace dclut
