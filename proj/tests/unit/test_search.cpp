#include "../support.hpp"

#include <dclut/decompose.hpp>
#include <dclut/emit.hpp>
#include <dclut/errors.hpp>
#include <dclut/search.hpp>

#include <doctest.h>

using namespace dclut;

TEST_CASE( "default configurations" )
{
  auto const t = lookup_table( 8, 3, std::vector<std::uint64_t>( 256 ) );
  auto const c = configurations( t, {} );
  CHECK( c.size() == 5 * 3 );
  CHECK( c.front() == std::pair{ 2u, 0u } );
  CHECK( c.back() == std::pair{ 6u, 2u } );

  search_config no_hbs;
  no_hbs.higher_bits = false;
  CHECK( configurations( t, no_hbs ).size() == 5 );

  search_config narrow;
  narrow.sub_table_bits = bit_range{ 3, 3 };
  narrow.low_bits = bit_range{ 1, 2 };
  CHECK( configurations( t, narrow ) == std::vector<std::pair<unsigned, unsigned>>{ { 3, 1 }, { 3, 2 } } );

  search_config bad;
  bad.sub_table_bits = bit_range{ 0, 3 };
  CHECK_THROWS_AS( configurations( t, bad ), usage_error );
  bad.sub_table_bits = bit_range{ 4, 3 };
  CHECK_THROWS_AS( configurations( t, bad ), usage_error );
  bad.sub_table_bits = bit_range{ 2, 8 };
  CHECK_THROWS_AS( configurations( t, bad ), usage_error );
  bad.sub_table_bits.reset();
  bad.low_bits = bit_range{ 0, 3 };
  CHECK_THROWS_AS( configurations( t, bad ), usage_error );

  // small inputs still get a sweep
  CHECK( configurations( lookup_table( 3, 1, std::vector<std::uint64_t>( 8 ) ), {} ).size() == 2 );
  CHECK( configurations( lookup_table( 1, 1, { 0, 1 } ), {} ).empty() );
}

TEST_CASE( "stored bits" )
{
  auto const plain = identity_plan( lookup_table( 8, 8, std::vector<std::uint64_t>( 256 ) ) );
  CHECK( cost_bits( plain ) == 2048 );
  CHECK( bit_breakdown( plain ).plain == 2048 );

  // constant table: only the bias table is stored
  auto const constant = lookup_table( 6, 4, std::vector<std::uint64_t>( 64, 9 ) );
  auto const r = run_configuration( constant, care_mask::all_care( 64 ), 2, 0, {} );
  plan const p( r.greedy, {} );
  auto const b = bit_breakdown( p );
  CHECK( b.ust == 0 );
  CHECK( b.idx == 0 );
  CHECK( b.rsh == 0 );
  CHECK( b.bias == 16 * 4 );
  CHECK( cost_bits( p ) == b.total() );
}

TEST_CASE( "family costs with one unique sub-table" )
{
  auto const t = test::family::table();
  auto const r = run_configuration( t, test::family::mask(), 2, 0, {} );
  REQUIRE( r.reduced );
  auto const& d = *r.reduced;
  CHECK( d.num_unique() == 1 );
  CHECK( d.w_st == 4 );
  auto const b = bit_breakdown( plan( d, {} ) );
  CHECK( b.ust == 16 );
  CHECK( b.idx == 0 );
  CHECK( b.rsh == 4 * 3 );
  CHECK( b.bias == 4 * 5 );
  CHECK( b.lb == 0 );
  // same count from the stored arrays themselves
  CHECK( b.total() == d.t_ust.size() * d.w_st + d.t_rsh.size() * 3 + d.t_bias.size() * 5 );
  CHECK( index_bits( d ) == 0 );
  CHECK( shift_bits( d ) == 3 );
}

TEST_CASE( "P-LUT estimate" )
{
  CHECK( cost_pluts( identity_plan( lookup_table( 6, 1, std::vector<std::uint64_t>( 64 ) ) ) ) == 1 );
  CHECK( cost_pluts( identity_plan( lookup_table( 8, 4, std::vector<std::uint64_t>( 256 ) ) ) ) == 16 );
  CHECK( cost_pluts( identity_plan( lookup_table( 12, 2, std::vector<std::uint64_t>( 4096 ) ) ) ) == 128 );
  CHECK( cost_pluts( identity_plan( lookup_table( 4, 3, std::vector<std::uint64_t>( 16 ) ) ) ) == 3 );
  CHECK( cost_pluts( identity_plan( lookup_table( 8, 4, std::vector<std::uint64_t>( 256 ) ) ), 4 ) == 64 );
  CHECK_THROWS_AS( cost_pluts( identity_plan( lookup_table( 4, 3, std::vector<std::uint64_t>( 16 ) ) ), 1 ), usage_error );
}

TEST_CASE( "compress never loses to the plain table" )
{
  std::mt19937_64 rng( 3 );
  auto const constant = lookup_table( 8, 6, std::vector<std::uint64_t>( 256, 33 ) );
  auto const c = compress( constant, care_mask::all_care( 256 ), {} );
  CHECK( cost_bits( c.chosen ) <= 256 * 6 );
  CHECK( reconstruction_table( c.chosen ) == constant );

  for ( int i = 0; i < 10; ++i )
  {
    auto const t = test::make_random_table( 8, 6, rng );
    auto const r = compress( t, care_mask::all_care( t.size() ), {} );
    CHECK( cost_bits( r.chosen ) <= 256 * 6 );
    CHECK( r.report.configs[0].plain );
    CHECK( r.report.configs[r.report.chosen].total_bits == cost_bits( r.chosen ) );
    for ( auto const& e : r.report.configs )
    {
      CHECK( e.total_bits == e.bits.total() );
      CHECK( e.total_bits >= cost_bits( r.chosen ) );
    }
  }
}

TEST_CASE( "the don't care halves the unique sub-tables of the family" )
{
  auto const t = test::family::table();
  search_config cfg;
  cfg.higher_bits = false;
  auto const with_dc = compress( t, test::family::mask(), cfg );
  auto const all_care = compress( t, care_mask::all_care( 16 ), cfg );
  REQUIRE_FALSE( with_dc.chosen.is_plain() );
  REQUIRE_FALSE( all_care.chosen.is_plain() );
  CHECK( with_dc.chosen.compressed().num_unique() == 1 );
  CHECK( all_care.chosen.compressed().num_unique() == 2 );
  CHECK( cost_bits( with_dc.chosen ) < cost_bits( all_care.chosen ) );
  CHECK( cost_bits( with_dc.chosen ) == 48 );
  CHECK( cost_bits( all_care.chosen ) == 68 );
  auto const& e = with_dc.report.configs[with_dc.report.chosen];
  CHECK( e.ust_before == 2 );
  CHECK( e.ust_after == 1 );
  CHECK( e.reduced_kept );
}

TEST_CASE( "all-care runs equal runs without the don't-care stage" )
{
  std::mt19937_64 rng( 8 );
  for ( int i = 0; i < 8; ++i )
  {
    auto const t = test::make_random_table( 10, 8, rng );
    search_config off;
    off.dont_cares = false;
    auto const a = compress( t, care_mask::all_care( t.size() ), {} );
    auto const b = compress( t, care_mask::all_care( t.size() ), off );
    CHECK( a.chosen == b.chosen );
    CHECK( a.report == b.report );
    CHECK( emit_plan_file( a.chosen, a.report ) == emit_plan_file( b.chosen, b.report ) );
  }
}

TEST_CASE( "results do not depend on the thread count" )
{
  std::mt19937_64 rng( 12 );
  for ( int i = 0; i < 4; ++i )
  {
    auto const t = test::make_random_table( 9, 4, rng );
    auto const m = test::make_random_mask( t.size(), 0.5, rng );
    search_config one, four;
    four.threads = 4;
    auto const a = compress( t, m, one );
    auto const b = compress( t, m, four );
    CHECK( a.chosen == b.chosen );
    CHECK( a.report == b.report );
  }
}

TEST_CASE( "disabled self-similarity gives one sub-table per slot" )
{
  std::mt19937_64 rng( 4 );
  auto const t = test::make_random_table( 8, 2, rng );
  search_config cfg;
  cfg.self_similarity = false;
  auto const r = run_configuration( t, care_mask::all_dont_care( t.size() ), 3, 0, cfg );
  CHECK( r.greedy.num_unique() == 32 );
  CHECK_FALSE( r.reduced );
}

TEST_CASE( "passes beyond the first never hurt" )
{
  std::mt19937_64 rng( 15 );
  for ( int i = 0; i < 6; ++i )
  {
    auto const t = test::make_random_table( 8, 3, rng );
    auto const m = test::make_random_mask( t.size(), 0.75, rng );
    search_config one, three;
    three.passes = 3;
    auto const a = run_configuration( t, m, 2, 0, one );
    auto const b = run_configuration( t, m, 2, 0, three );
    CHECK( b.ust_after <= a.ust_after );
    CHECK( a.ust_after <= a.ust_before );
  }
}
