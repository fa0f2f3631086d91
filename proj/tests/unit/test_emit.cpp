#include "../support.hpp"

#include <dclut/emit.hpp>
#include <dclut/errors.hpp>
#include <dclut/search.hpp>
#include <dclut/verilog_model.hpp>

#include <json.hpp>

#include <doctest.h>

using namespace dclut;

namespace
{

std::size_t count( std::string const& text, std::string const& what )
{
  std::size_t n = 0;
  for ( auto p = text.find( what ); p != std::string::npos; p = text.find( what, p + 1 ) )
    ++n;
  return n;
}

compress_result family_result()
{
  search_config cfg;
  cfg.higher_bits = false;
  return compress( test::family::table(), test::family::mask(), cfg );
}

} // namespace

TEST_CASE( "identifiers" )
{
  CHECK( is_verilog_identifier( "lut_0" ) );
  CHECK( is_verilog_identifier( "_x" ) );
  CHECK_FALSE( is_verilog_identifier( "" ) );
  CHECK_FALSE( is_verilog_identifier( "0lut" ) );
  CHECK_FALSE( is_verilog_identifier( "a-b" ) );
  CHECK_THROWS_AS( emit_verilog( identity_plan( lookup_table( 1, 1, { 0, 1 } ) ), "9x" ), usage_error );
}

TEST_CASE( "plain plan is one ROM" )
{
  std::vector<std::uint64_t> values( 16 );
  for ( std::size_t x = 0; x < 16; ++x )
    values[x] = x % 4;
  auto const p = identity_plan( lookup_table( 4, 2, values ) );
  auto const v = emit_verilog( p, "rom16" );
  CHECK( v.find( "module rom16" ) != std::string::npos );
  CHECK( v.find( "input  wire [3:0] address" ) != std::string::npos );
  CHECK( v.find( "output wire [1:0] data" ) != std::string::npos );
  CHECK( count( v, "case (" ) == 1 );
  CHECK( count( v, "4'h" ) == 16 );
  verilog_model const m( v );
  for ( std::uint64_t x = 0; x < 16; ++x )
    CHECK( m.evaluate( x ) == values[x] );
}

TEST_CASE( "family plan golden text" )
{
  auto const r = family_result();
  auto const v = emit_verilog( r.chosen, "family" );
  std::string const golden = R"(// generated by dclut
module family (
  input  wire [3:0] address,
  output wire [4:0] data
);

  wire [1:0] x_hb = address[3:2];
  wire [1:0] x_lb = address[1:0];

  reg [4:0] t_bias;
  always @(*) begin
    case (x_hb)
      2'h0: t_bias = 5'h3;
      2'h1: t_bias = 5'ha;
      2'h2: t_bias = 5'h0;
      2'h3: t_bias = 5'h10;
      default: t_bias = 5'h0;
    endcase
  end

  reg [3:0] t_ust;
  always @(*) begin
    case (x_lb)
      2'h0: t_ust = 4'h0;
      2'h1: t_ust = 4'h6;
      2'h2: t_ust = 4'h8;
      2'h3: t_ust = 4'hf;
      default: t_ust = 4'h0;
    endcase
  end

  reg [2:0] t_rsh;
  always @(*) begin
    case (x_hb)
      2'h0: t_rsh = 3'h2;
      2'h1: t_rsh = 3'h1;
      2'h2: t_rsh = 3'h0;
      2'h3: t_rsh = 3'h3;
      default: t_rsh = 3'h0;
    endcase
  end

  wire [4:0] hb = (t_ust >> t_rsh) + t_bias;

  assign data = hb;

endmodule
)";
  CHECK( v == golden );
  CHECK( count( v, "reg [3:0] t_ust" ) == 1 );
  CHECK( emit_verilog( r.chosen, "family" ) == v );
}

TEST_CASE( "interpreted Verilog equals evaluate" )
{
  std::mt19937_64 rng( 31 );
  for ( int i = 0; i < 25; ++i )
  {
    unsigned const w_in = 5 + i % 5;
    unsigned const w_out = 1 + i % 8;
    auto const t = test::make_random_table( w_in, w_out, rng );
    auto const m = test::make_random_mask( t.size(), 0.2 * ( i % 5 ), rng );
    auto const r = compress( t, m, {} );
    verilog_model const model( emit_verilog( r.chosen, "dut" ) );
    CHECK( model.input_bits() == w_in );
    CHECK( model.output_bits() == w_out );
    for ( std::uint64_t x = 0; x < t.size(); ++x )
      CHECK( model.evaluate( x ) == evaluate( r.chosen, x ) );
    // every configuration of the sweep, not only the winner
    for ( unsigned w_lb_out = 0; w_lb_out < w_out; ++w_lb_out )
    {
      auto const c = run_configuration( t, m, 2, w_lb_out, {} );
      plan const p( c.reduced.value_or( c.greedy ), plan_config{ 2, w_lb_out, default_exiguity } );
      verilog_model const cm( emit_verilog( p, "cfg" ) );
      for ( std::uint64_t x = 0; x < t.size(); ++x )
        CHECK( cm.evaluate( x ) == test::ref_eval( p, x ) );
    }
  }
}

TEST_CASE( "plan files round trip" )
{
  std::mt19937_64 rng( 2 );
  auto const id = identity_plan( test::make_random_table( 5, 7, rng ) );
  cost_report const empty{ {}, 0 };
  auto const text = emit_plan_file( id, empty );
  auto const [p, rep] = load_plan_file( text );
  CHECK( p == id );
  CHECK( rep == empty );
  CHECK( emit_plan_file( p, rep ) == text );

  auto const fam = family_result();
  auto const ft = emit_plan_file( fam.chosen, fam.report );
  auto const [fp, frep] = load_plan_file( ft );
  CHECK( fp == fam.chosen );
  CHECK( frep == fam.report );
  CHECK( emit_plan_file( fp, frep ) == ft );
}

TEST_CASE( "malformed plan files" )
{
  auto const fam = family_result();
  auto const text = emit_plan_file( fam.chosen, fam.report );

  auto const cut = text.substr( 0, text.find( "table t_rsh" ) );
  try
  {
    load_plan_file( cut );
    FAIL( "expected parse_error" );
  }
  catch ( parse_error const& e )
  {
    CHECK( std::string( e.what() ).find( "t_rsh" ) != std::string::npos );
    CHECK( e.line() > 0 );
  }

  auto const no_end = text.substr( 0, text.rfind( "end" ) );
  CHECK_THROWS_AS( load_plan_file( no_end ), parse_error );
  CHECK_THROWS_AS( load_plan_file( "" ), parse_error );
  CHECK_THROWS_AS( load_plan_file( "dclut-plan 2\n" ), parse_error );

  // an index past the unique count fails validation and is reported as a parse error
  auto broken = text;
  auto const idx = broken.find( "table t_idx 4\n" );
  REQUIRE( idx != std::string::npos );
  broken.replace( idx + 14, 7, "5 0 0 0" );
  CHECK_THROWS_AS( load_plan_file( broken ), parse_error );
}

TEST_CASE( "reports" )
{
  auto const fam = family_result();
  auto const text = render_report_text( fam.report );
  CHECK( text.find( "chosen:" ) != std::string::npos );
  CHECK( text.find( "2->1" ) != std::string::npos );
  auto const j = nlohmann::json::parse( render_report_json( fam.report ) );
  CHECK( j["chosen"] == fam.report.chosen );
  CHECK( j["configs"].size() == fam.report.configs.size() );
  auto const& chosen = j["configs"][fam.report.chosen];
  CHECK( chosen["total_bits"] == 48 );
  CHECK( chosen["ust_before"] == 2 );
  CHECK( chosen["ust_after"] == 1 );
}
