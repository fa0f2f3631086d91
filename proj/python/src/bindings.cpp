#include <dclut/emit.hpp>
#include <dclut/errors.hpp>
#include <dclut/mask.hpp>
#include <dclut/search.hpp>
#include <dclut/verify.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dclut;

namespace
{

lookup_table make_table( std::vector<std::uint64_t> values, unsigned w_out )
{
  auto const w_in = ceil_log2( values.size() );
  if ( values.size() < 2 || ( std::size_t{ 1 } << w_in ) != values.size() )
  {
    throw usage_error( "table length must be a power of two >= 2" );
  }
  return lookup_table( w_in, w_out, std::move( values ) );
}

care_mask make_mask( std::optional<std::vector<bool>> const& care, std::size_t size )
{
  if ( !care )
  {
    return care_mask::all_care( size );
  }
  if ( care->size() != size )
  {
    throw usage_error( "mask length " + std::to_string( care->size() ) + " does not match table length " +
                       std::to_string( size ) );
  }
  std::vector<std::uint8_t> flags( care->begin(), care->end() );
  return care_mask( std::move( flags ) );
}

unsigned infer_width( std::vector<std::uint64_t> const& values, std::optional<unsigned> w_out )
{
  if ( w_out )
  {
    return *w_out;
  }
  std::uint64_t max = 0;
  for ( auto v : values )
    max = std::max( max, v );
  return std::max( 1u, bit_length( max ) );
}

} // namespace

PYBIND11_MODULE( _dclut, m )
{
  m.doc() = "Lookup-table compression with don't-care optimization";

  py::register_exception<usage_error>( m, "UsageError", PyExc_ValueError );
  py::register_exception<parse_error>( m, "ParseError", PyExc_ValueError );
  py::register_exception<address_error>( m, "AddressError", PyExc_IndexError );
  py::register_exception<bounds_error>( m, "BoundsError", PyExc_ValueError );
  py::register_exception<invariant_error>( m, "InvariantError", PyExc_RuntimeError );

  py::class_<config_cost>( m, "ConfigCost" )
      .def_readonly( "plain", &config_cost::plain )
      .def_readonly( "w_lb_in", &config_cost::w_lb_in )
      .def_readonly( "w_lb_out", &config_cost::w_lb_out )
      .def_readonly( "total_bits", &config_cost::total_bits )
      .def_readonly( "pluts", &config_cost::pluts )
      .def_readonly( "ust_before", &config_cost::ust_before )
      .def_readonly( "ust_after", &config_cost::ust_after )
      .def_readonly( "reduced_kept", &config_cost::reduced_kept );

  py::class_<cost_report>( m, "CostReport" )
      .def_readonly( "configs", &cost_report::configs )
      .def_readonly( "chosen", &cost_report::chosen )
      .def( "text", &render_report_text )
      .def( "json", []( cost_report const& r ) { return render_report_json( r ); } );

  py::class_<plan>( m, "Plan" )
      .def_property_readonly( "is_plain", &plan::is_plain )
      .def_property_readonly( "input_bits", &plan::input_bits )
      .def_property_readonly( "output_bits", &plan::output_bits )
      .def_property_readonly( "w_lb_in", []( plan const& p ) { return p.is_plain() ? 0u : p.compressed().w_lb_in; } )
      .def_property_readonly( "w_lb_out", []( plan const& p ) { return p.is_plain() ? 0u : p.compressed().w_lb_out; } )
      .def_property_readonly( "num_unique",
                              []( plan const& p ) { return p.is_plain() ? std::size_t{ 0 } : p.compressed().num_unique(); } )
      .def( "evaluate", &evaluate, py::arg( "address" ) )
      .def( "values", []( plan const& p ) {
        auto const t = reconstruction_table( p );
        return std::vector<std::uint64_t>( t.values().begin(), t.values().end() );
      } )
      .def( "verilog", &emit_verilog, py::arg( "module_name" ) = "lut" );

  py::class_<compress_result>( m, "CompressResult" )
      .def_readonly( "plan", &compress_result::chosen )
      .def_readonly( "report", &compress_result::report )
      .def( "plan_file", []( compress_result const& r ) { return emit_plan_file( r.chosen, r.report ); } );

  py::class_<verify_report>( m, "VerifyReport" )
      .def_readonly( "care_mismatches", &verify_report::care_mismatches )
      .def_readonly( "total_checked", &verify_report::total_checked )
      .def_readonly( "dont_cares_changed", &verify_report::dont_cares_changed )
      .def_property_readonly( "passed", &verify_report::passed );

  m.def(
      "compress",
      []( std::vector<std::uint64_t> values, std::optional<std::vector<bool>> care, std::optional<unsigned> w_out,
          std::uint64_t exiguity, bool higher_bits, bool self_similarity, bool dont_cares, unsigned passes, unsigned threads ) {
        auto const width = infer_width( values, w_out );
        auto const table = make_table( std::move( values ), width );
        auto const mask = make_mask( care, table.size() );
        search_config cfg;
        cfg.exiguity = exiguity;
        cfg.higher_bits = higher_bits;
        cfg.self_similarity = self_similarity;
        cfg.dont_cares = dont_cares;
        cfg.passes = passes;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return compress( table, mask, cfg );
      },
      py::arg( "values" ), py::arg( "care" ) = py::none(), py::arg( "w_out" ) = py::none(),
      py::arg( "exiguity" ) = default_exiguity, py::arg( "higher_bits" ) = true, py::arg( "self_similarity" ) = true,
      py::arg( "dont_cares" ) = true, py::arg( "passes" ) = 1u, py::arg( "threads" ) = 1u,
      "Compress a table given as a list of values (length a power of two); `care` is an optional list of bools." );

  m.def(
      "verify",
      []( std::vector<std::uint64_t> values, plan const& p, std::optional<std::vector<bool>> care ) {
        auto const table = make_table( std::move( values ), p.output_bits() );
        return verify_plan( table, make_mask( care, table.size() ), p );
      },
      py::arg( "values" ), py::arg( "plan" ), py::arg( "care" ) = py::none() );

  m.def(
      "load_plan", []( std::string const& text ) { return load_plan_file( text ).first; }, py::arg( "text" ) );

  m.def(
      "mask_from_observations",
      []( unsigned w_in, std::vector<std::uint64_t> const& observed ) {
        auto const mask = mask_from_observations( w_in, observed );
        std::vector<bool> care( mask.size() );
        for ( std::size_t x = 0; x < mask.size(); ++x )
          care[x] = mask[x];
        return care;
      },
      py::arg( "w_in" ), py::arg( "observed" ) );

  m.def(
      "oracle_min_ust",
      []( std::vector<std::uint64_t> values, std::vector<bool> care, unsigned w_lb_in, unsigned w_st,
          std::optional<unsigned> w_out ) {
        auto const width = infer_width( values, w_out );
        auto const table = make_table( std::move( values ), width );
        return oracle_min_ust( table, make_mask( care, table.size() ), w_lb_in, w_st );
      },
      py::arg( "values" ), py::arg( "care" ), py::arg( "w_lb_in" ), py::arg( "w_st" ), py::arg( "w_out" ) = py::none() );
}
