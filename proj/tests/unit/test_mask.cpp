#include <dclut/errors.hpp>
#include <dclut/mask.hpp>

#include <doctest.h>

#include <numeric>
#include <sstream>

using namespace dclut;

TEST_CASE( "observations mark cares" )
{
  // address 0 never observed
  std::vector<std::uint64_t> observed( 255 );
  std::iota( observed.begin(), observed.end(), 1 );
  auto const m = mask_from_observations( 8, observed );
  CHECK( m.size() == 256 );
  CHECK_FALSE( m[0] );
  CHECK( m[1] );
  CHECK( m.count_care() == 255 );

  std::vector<std::uint64_t> all( 16 );
  std::iota( all.begin(), all.end(), 0 );
  CHECK( mask_from_observations( 4, all ) == care_mask::all_care( 16 ) );
  CHECK( mask_from_observations( 4, {} ) == care_mask::all_dont_care( 16 ) );

  std::vector<std::uint64_t> dup{ 3, 3, 3 };
  CHECK( mask_from_observations( 4, dup ).count_care() == 1 );
}

TEST_CASE( "out of range observation names its position" )
{
  std::vector<std::uint64_t> observed{ 1, 2, 16 };
  try
  {
    mask_from_observations( 4, observed );
    FAIL( "expected address_error" );
  }
  catch ( address_error const& e )
  {
    CHECK( std::string( e.what() ).find( "observation 3" ) != std::string::npos );
  }
}

TEST_CASE( "union of observations is the OR of masks" )
{
  std::vector<std::uint64_t> a{ 0, 3, 5 }, b{ 5, 9 }, ab{ 0, 3, 5, 5, 9 };
  auto const ma = mask_from_observations( 4, a );
  auto const mb = mask_from_observations( 4, b );
  auto const mab = mask_from_observations( 4, ab );
  for ( std::size_t x = 0; x < 16; ++x )
  {
    CHECK( mab[x] == ( ma[x] || mb[x] ) );
  }
}

TEST_CASE( "care fraction" )
{
  CHECK( care_fraction( care_mask::all_care( 16 ) ) == 1.0 );
  CHECK( care_fraction( care_mask::all_dont_care( 16 ) ) == 0.0 );
  std::vector<std::uint8_t> flags( 16, 1 );
  flags[0] = flags[5] = flags[7] = flags[15] = 0;
  CHECK( care_fraction( care_mask( flags ) ) == doctest::Approx( 0.75 ) );
}

TEST_CASE( "observation file parsing" )
{
  std::istringstream in( "# header\n00000000\n\n0xff\n00000011 # trailing\n" );
  auto const obs = read_observations( in, 8 );
  CHECK( obs == std::vector<std::uint64_t>{ 0, 255, 3 } );

  std::istringstream short_binary( "0101\n" );
  CHECK_THROWS_AS( read_observations( short_binary, 8 ), parse_error );

  std::istringstream junk( "00000001\n0xg1\n" );
  try
  {
    read_observations( junk, 8 );
    FAIL( "expected parse_error" );
  }
  catch ( parse_error const& e )
  {
    CHECK( e.line() == 2 );
  }
}

TEST_CASE( "mask file round trip" )
{
  std::vector<std::uint8_t> flags{ 1, 0, 0, 1, 1, 1, 0, 1 };
  care_mask const m( flags );
  std::ostringstream out;
  write_mask_file( out, m );
  CHECK( out.str() == "1\n0\n0\n1\n1\n1\n0\n1\n" );
  std::istringstream in( out.str() );
  CHECK( read_mask_file( in, 8 ) == m );
  std::istringstream wrong( out.str() );
  CHECK_THROWS_AS( read_mask_file( wrong, 16 ), usage_error );
  std::istringstream bad( "1\n2\n" );
  CHECK_THROWS_AS( read_mask_file( bad, 2 ), parse_error );
}
