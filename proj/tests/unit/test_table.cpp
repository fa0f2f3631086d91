#include "../support.hpp"

#include <dclut/errors.hpp>
#include <dclut/table.hpp>
#include <dclut/table_io.hpp>

#include <doctest.h>

#include <sstream>

using namespace dclut;

namespace
{

/* one unique sub-table [4,6,8,15]; four sub-tables with shifts 1 and biases 2 */
decomposition shifted_example()
{
  decomposition d;
  d.w_in = 4;
  d.w_out = 5;
  d.w_lb_in = 2;
  d.w_st = 4;
  d.t_ust = { 4, 6, 8, 15 };
  d.t_idx = { 0, 0, 0, 0 };
  d.t_rsh = { 1, 0, 3, 2 };
  d.t_bias = { 2, 0, 1, 7 };
  return d;
}

} // namespace

TEST_CASE( "bit helpers" )
{
  CHECK( bit_length( 0 ) == 0 );
  CHECK( bit_length( 1 ) == 1 );
  CHECK( bit_length( 15 ) == 4 );
  CHECK( bit_length( 16 ) == 5 );
  CHECK( ceil_log2( 1 ) == 0 );
  CHECK( ceil_log2( 2 ) == 1 );
  CHECK( ceil_log2( 3 ) == 2 );
  CHECK( ceil_log2( 5 ) == 3 );
  CHECK( ceil_log2( 8 ) == 3 );
}

TEST_CASE( "lookup_table validates its invariants" )
{
  CHECK_NOTHROW( lookup_table( 2, 3, { 0, 7, 1, 2 } ) );
  CHECK_THROWS_AS( lookup_table( 2, 3, { 0, 8, 1, 2 } ), usage_error );
  CHECK_THROWS_AS( lookup_table( 2, 3, { 0, 1, 2 } ), usage_error );
  CHECK_THROWS_AS( lookup_table( 0, 3, { 0 } ), usage_error );
  CHECK_THROWS_AS( lookup_table( 2, 0, { 0, 0, 0, 0 } ), usage_error );
  CHECK_THROWS_AS( lookup_table( 2, 64, { 0, 0, 0, 0 } ), usage_error );
  CHECK_THROWS_AS( lookup_table( 25, 1, {} ), usage_error );
  // the cap is configurable
  CHECK_THROWS_AS( lookup_table( 3, 1, std::vector<std::uint64_t>( 8 ), 2 ), usage_error );
  auto const t = lookup_table( 2, 3, { 0, 7, 1, 2 } );
  CHECK( t.at( 1 ) == 7 );
  CHECK_THROWS_AS( t.at( 4 ), address_error );
}

TEST_CASE( "evaluate applies the decomposition" )
{
  auto const d = shifted_example();
  plan const p( d, plan_config{ 2, 0, 250 } );
  // x = 1: x_hb = 0, x_lb = 1 -> (6 >> 1) + 2
  CHECK( evaluate( p, 1 ) == 5 );
  for ( std::uint64_t x = 0; x < 16; ++x )
  {
    CHECK( evaluate( p, x ) == test::ref_eval( d, x ) );
  }
  CHECK_THROWS_AS( evaluate( p, 16 ), address_error );
}

TEST_CASE( "shift by three of the family generator" )
{
  auto d = shifted_example();
  d.t_bias = { 0, 0, 0, 0 };
  plan const p( d, plan_config{ 2, 0, 0 } );
  CHECK( evaluate( p, 8 ) == 0 );
  CHECK( evaluate( p, 9 ) == 0 );
  CHECK( evaluate( p, 10 ) == 1 );
  CHECK( evaluate( p, 11 ) == 1 );
}

TEST_CASE( "low bits are concatenated below the high part" )
{
  decomposition d;
  d.w_in = 2;
  d.w_out = 3;
  d.w_lb_in = 1;
  d.w_lb_out = 1;
  d.w_st = 1;
  d.t_ust = { 0, 1 };
  d.t_idx = { 0, 0 };
  d.t_rsh = { 0, 1 };
  d.t_bias = { 1, 2 };
  d.t_lb = { 1, 0, 0, 1 };
  plan const p( d, {} );
  // hb: [1, 2, 2, 2]
  CHECK( reconstruction_table( p ) == lookup_table( 2, 3, { 3, 4, 4, 5 } ) );
}

TEST_CASE( "decomposition validation" )
{
  auto d = shifted_example();
  CHECK_NOTHROW( d.validate() );
  d.t_idx[0] = 1;
  CHECK_THROWS_AS( d.validate(), invariant_error );
  d = shifted_example();
  d.t_rsh[0] = 5;
  CHECK_THROWS_AS( d.validate(), invariant_error );
  d = shifted_example();
  d.t_ust[3] = 16;
  CHECK_THROWS_AS( d.validate(), invariant_error );
  d = shifted_example();
  d.t_bias.pop_back();
  CHECK_THROWS_AS( d.validate(), invariant_error );
  d = shifted_example();
  d.t_bias[3] = 30; // 15 >> 2 + 30 overflows 5 bits
  CHECK_THROWS( plan( d, {} ) );
}

TEST_CASE( "identity plans reproduce the table" )
{
  std::mt19937_64 rng( 11 );
  for ( int i = 0; i < 10; ++i )
  {
    auto const t = test::make_random_table( 6, 7, rng );
    CHECK( reconstruction_table( identity_plan( t ) ) == t );
    auto const id = identity_decomposition( t );
    CHECK( id.num_unique() == 1 );
    CHECK( std::all_of( id.t_rsh.begin(), id.t_rsh.end(), []( auto v ) { return v == 0; } ) );
    CHECK( std::all_of( id.t_bias.begin(), id.t_bias.end(), []( auto v ) { return v == 0; } ) );
    CHECK( reconstruction_table( plan( id, {} ) ) == t );
  }
}

TEST_CASE( "high_bits keeps the top part" )
{
  auto const t = lookup_table( 2, 4, { 0b1011, 0b0110, 0b1111, 0b0001 } );
  CHECK( high_bits( t, 2 ) == lookup_table( 2, 2, { 0b10, 0b01, 0b11, 0b00 } ) );
  CHECK( high_bits( t, 0 ) == t );
}

TEST_CASE( "table files" )
{
  std::istringstream in( "# comment\n0x1f\n3\n\n0\nA\n" );
  auto const loaded = read_table_file( in );
  CHECK( loaded.table == lookup_table( 2, 5, { 31, 3, 0, 10 } ) );
  CHECK( loaded.output_bits_inferred );
  CHECK( loaded.max_value == 31 );
  CHECK( loaded.describe().find( "inferred" ) != std::string::npos );

  std::istringstream zeros( "0\n0\n" );
  CHECK( read_table_file( zeros ).table.output_bits() == 1 );

  std::istringstream wide( "1\n2\n" );
  CHECK( read_table_file( wide, 8u ).table.output_bits() == 8 );

  std::istringstream three( "1\n2\n3\n" );
  CHECK_THROWS_AS( read_table_file( three ), parse_error );

  std::istringstream bad( "1\nzz\n" );
  try
  {
    read_table_file( bad );
    FAIL( "expected parse_error" );
  }
  catch ( parse_error const& e )
  {
    CHECK( e.line() == 2 );
  }

  std::istringstream narrow( "1\n9\n" );
  CHECK_THROWS( read_table_file( narrow, 3u ) );

  std::ostringstream out;
  write_table_file( out, loaded.table );
  std::istringstream back( out.str() );
  CHECK( read_table_file( back, 5u ).table == loaded.table );
}
