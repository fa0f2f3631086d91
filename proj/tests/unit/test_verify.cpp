#include "../support.hpp"

#include <dclut/errors.hpp>
#include <dclut/search.hpp>
#include <dclut/verify.hpp>

#include <doctest.h>

using namespace dclut;

TEST_CASE( "identity plan verifies" )
{
  std::mt19937_64 rng( 1 );
  auto const t = test::make_random_table( 8, 5, rng );
  auto const m = test::make_random_mask( t.size(), 0.5, rng );
  auto const r = verify_plan( t, m, identity_plan( t ) );
  CHECK( r.passed() );
  CHECK( r.total_checked == 256 );
  CHECK( r.dont_cares_changed == 0 );
  CHECK( verify_plan( t, m, identity_plan( t ), 4 ).passed() );
}

TEST_CASE( "family plan changes exactly one don't care" )
{
  search_config cfg;
  cfg.higher_bits = false;
  auto const t = test::family::table();
  auto const r = compress( t, test::family::mask(), cfg );
  auto const v = verify_plan( t, test::family::mask(), r.chosen );
  CHECK( v.passed() );
  CHECK( v.dont_cares_changed == 1 );
  CHECK( evaluate( r.chosen, test::family::dont_care_address ) == test::family::forced_value + 3 );
}

TEST_CASE( "corrupted plans are caught" )
{
  search_config cfg;
  cfg.higher_bits = false;
  auto const t = test::family::table();
  auto const r = compress( t, care_mask::all_care( 16 ), cfg );
  REQUIRE_FALSE( r.chosen.is_plain() );
  auto d = r.chosen.compressed();
  d.t_ust[1] ^= 1;
  auto const bad = verify_plan( t, care_mask::all_care( t.size() ), plan( d, r.chosen.config() ) );
  CHECK_FALSE( bad.passed() );
  CHECK( bad.care_mismatches.size() >= 1 );
}

TEST_CASE( "size mismatches" )
{
  auto const t = lookup_table( 2, 2, { 0, 1, 2, 3 } );
  CHECK_THROWS_AS( verify_plan( t, care_mask::all_care( 8 ), identity_plan( t ) ), usage_error );
  CHECK_THROWS_AS( verify_plan( t, care_mask::all_care( 4 ), identity_plan( lookup_table( 3, 2, std::vector<std::uint64_t>( 8 ) ) ) ),
                   usage_error );
  CHECK_THROWS_AS( verify_plan( t, care_mask::all_care( 4 ), identity_plan( lookup_table( 2, 3, { 0, 1, 2, 3 } ) ) ),
                   usage_error );
}

TEST_CASE( "oracle on known instances" )
{
  auto const fam = test::family::table();
  CHECK( oracle_min_ust( fam, test::family::mask(), 2, 4 ) == 1 );
  CHECK( oracle_min_ust( fam, care_mask::all_care( 16 ), 2, 4 ) == 2 );

  std::mt19937_64 rng( 4 );
  auto const t = test::make_random_table( 3, 3, rng );
  CHECK( oracle_min_ust( t, care_mask::all_dont_care( 8 ), 1, 2 ) == 1 );
}

TEST_CASE( "oracle agrees with brute-force enumeration" )
{
  std::mt19937_64 rng( 19 );
  int checked = 0;
  for ( int trial = 0; trial < 120; ++trial )
  {
    unsigned const w_in = 3 + trial % 3;
    unsigned const w_lb_in = 1 + trial % 2;
    unsigned const w_out = 2 + trial % 2;
    auto const t = test::make_random_table( w_in, w_out, rng );
    auto m = test::make_random_mask( t.size(), 0.3, rng );
    if ( m.size() - m.count_care() > 6 )
      continue;
    unsigned w_st = 0;
    for ( std::size_t i = 0; i < t.size(); i += std::size_t{ 1 } << w_lb_in )
    {
      auto const lo = *std::min_element( t.values().begin() + i, t.values().begin() + i + ( 1 << w_lb_in ) );
      for ( std::size_t k = 0; k < ( std::size_t{ 1 } << w_lb_in ); ++k )
        w_st = std::max( w_st, bit_length( t[i + k] - lo ) );
    }
    CHECK( oracle_min_ust( t, m, w_lb_in, w_st ) == test::ref_min_ust( t, m, w_lb_in, w_st ) );
    ++checked;
  }
  CHECK( checked >= 50 );
}

TEST_CASE( "oracle bounds are enforced" )
{
  auto const big = lookup_table( 9, 2, std::vector<std::uint64_t>( 512 ) );
  CHECK_THROWS_AS( oracle_min_ust( big, care_mask::all_care( 512 ), 2, 1 ), bounds_error );
  auto const t = lookup_table( 6, 2, std::vector<std::uint64_t>( 64 ) );
  CHECK_THROWS_AS( oracle_min_ust( t, care_mask::all_care( 64 ), 3, 1 ), bounds_error );
  CHECK_THROWS_AS( oracle_min_ust( t, care_mask::all_dont_care( 64 ), 2, 1 ), bounds_error );
}
