#include "commands.hpp"

#include <dclut/emit.hpp>
#include <dclut/errors.hpp>
#include <dclut/mask.hpp>
#include <dclut/synth.hpp>
#include <dclut/table_io.hpp>
#include <dclut/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <random>
#include <thread>

namespace fs = std::filesystem;

namespace dclut::cli
{

search_config search_flags::to_config( unsigned w_in ) const
{
  search_config cfg;
  cfg.exiguity = exiguity;
  cfg.higher_bits = !no_hbs;
  cfg.self_similarity = !no_ssc;
  cfg.dont_cares = !no_dc;
  cfg.passes = passes;
  cfg.threads = threads;
  if ( min_tsize || max_tsize )
  {
    unsigned const lo = w_in >= 4 ? 2 : 1;
    unsigned const hi = w_in >= 4 ? w_in - 2 : w_in - 1;
    cfg.sub_table_bits = bit_range{ min_tsize.value_or( lo ), max_tsize.value_or( hi ) };
  }
  return cfg;
}

namespace
{

std::string read_file( fs::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw usage_error( "cannot open '" + path.string() + "'" );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file( fs::path const& path, std::string const& content )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out || !( out << content ) )
  {
    throw usage_error( "cannot write '" + path.string() + "'" );
  }
}

loaded_table load_table( fs::path const& path, std::optional<unsigned> output_bits )
{
  std::istringstream in( read_file( path ) );
  try
  {
    return read_table_file( in, output_bits );
  }
  catch ( parse_error const& e )
  {
    throw parse_error( e.line(), path.string() + ": " + e.what() );
  }
}

care_mask load_mask( std::optional<fs::path> const& path, std::size_t size )
{
  if ( !path )
  {
    return care_mask::all_care( size );
  }
  std::istringstream in( read_file( *path ) );
  try
  {
    return read_mask_file( in, size );
  }
  catch ( parse_error const& e )
  {
    throw parse_error( e.line(), path->string() + ": " + e.what() );
  }
}

std::string module_name_for( std::string const& name )
{
  std::string id;
  for ( auto c : name )
  {
    id.push_back( std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' ? c : '_' );
  }
  if ( id.empty() || std::isdigit( static_cast<unsigned char>( id.front() ) ) )
  {
    id.insert( id.begin(), 't' );
  }
  return id;
}

struct table_outcome
{
  std::string name;
  bool ok{ false };
  std::string error;
  int status{ exit_ok };
  std::uint64_t total_bits{ 0 };
  std::uint64_t pluts{ 0 };
  std::size_t ust_before{ 0 };
  std::size_t ust_after{ 0 };
  std::optional<std::uint64_t> all_care_bits;
};

struct compressed_table
{
  loaded_table input;
  care_mask mask;
  compress_result result;
  verify_report check;
  std::string document; ///< rendered report
};

std::string render_document( std::string const& name, fs::path const& table_path,
                             std::optional<fs::path> const& mask_path, compressed_table const& c,
                             search_config const& cfg, bool json )
{
  auto const& chosen = c.result.report.configs.at( c.result.report.chosen );
  if ( json )
  {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["table"] = { { "path", table_path.string() },
                   { "w_in", c.input.table.input_bits() },
                   { "w_out", c.input.table.output_bits() },
                   { "w_out_inferred", c.input.output_bits_inferred },
                   { "lines", c.input.lines } };
    j["mask"] = { { "path", mask_path ? mask_path->string() : std::string() }, { "care_fraction", care_fraction( c.mask ) } };
    j["exiguity"] = cfg.exiguity;
    j["passes"] = cfg.passes;
    j["report"] = nlohmann::ordered_json::parse( render_report_json( c.result.report ) );
    j["ust_before"] = chosen.ust_before;
    j["ust_after"] = chosen.ust_after;
    j["verify"] = { { "care_mismatches", c.check.care_mismatches.size() },
                    { "total_checked", c.check.total_checked },
                    { "dont_cares_changed", c.check.dont_cares_changed } };
    return j.dump( 2 ) + "\n";
  }
  std::ostringstream os;
  os << "dclut report: " << name << "\n";
  os << "table: " << table_path.string() << " " << c.input.describe() << "\n";
  os << "mask: " << ( mask_path ? mask_path->string() : std::string( "none (all care)" ) ) << " care_fraction=" << std::fixed
     << std::setprecision( 4 ) << care_fraction( c.mask ) << std::defaultfloat << "\n";
  os << "exiguity: " << cfg.exiguity << " passes: " << cfg.passes << "\n";
  os << render_report_text( c.result.report );
  if ( !chosen.plain )
  {
    os << "unique sub-tables: before=" << chosen.ust_before << " after=" << chosen.ust_after << "\n";
  }
  os << "verify: " << c.check.care_mismatches.size() << " care mismatches over " << c.check.total_checked
     << " addresses, " << c.check.dont_cares_changed << " don't-care entries changed\n";
  return os.str();
}

compressed_table compress_files( fs::path const& table_path, std::optional<fs::path> const& mask_path,
                                 search_flags const& flags, search_config& cfg_out )
{
  compressed_table c{ load_table( table_path, flags.output_bits ), {}, {}, {}, {} };
  c.mask = load_mask( mask_path, c.input.table.size() );
  cfg_out = flags.to_config( c.input.table.input_bits() );
  c.result = compress( c.input.table, c.mask, cfg_out );
  c.check = verify_plan( c.input.table, c.mask, c.result.chosen );
  return c;
}

void write_outputs( fs::path const& dir, std::string const& name, compressed_table const& c )
{
  fs::create_directories( dir );
  write_file( dir / ( name + ".v" ), emit_verilog( c.result.chosen, module_name_for( name ) ) );
  write_file( dir / ( name + ".plan" ), emit_plan_file( c.result.chosen, c.result.report ) );
  write_file( dir / ( name + ".report" ), c.document );
}

template<class Fn>
int guarded( std::ostream& err, Fn&& fn )
{
  try
  {
    return fn();
  }
  catch ( std::exception const& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
}

} // namespace

int cmd_compress( compress_options const& options, std::ostream& out, std::ostream& err )
{
  return guarded( err, [&] {
    auto const name = options.name.value_or( options.table.stem().string() );
    search_config cfg;
    auto c = compress_files( options.table, options.mask, options.search, cfg );
    c.document = render_document( name, options.table, options.mask, c, cfg, options.json );
    write_outputs( options.out, name, c );
    out << c.document;
    return c.check.passed() ? exit_ok : exit_verify_failed;
  } );
}

int cmd_mask( mask_options const& options, std::ostream& out, std::ostream& err )
{
  return guarded( err, [&] {
    if ( options.w_in < 1 || options.w_in > default_max_input_bits )
    {
      throw usage_error( "--win must be in [1, " + std::to_string( default_max_input_bits ) + "]" );
    }
    std::istringstream in( read_file( options.observations ) );
    std::vector<std::uint64_t> observed;
    try
    {
      observed = read_observations( in, options.w_in );
    }
    catch ( parse_error const& e )
    {
      throw parse_error( e.line(), options.observations.string() + ": " + e.what() );
    }
    auto const mask = mask_from_observations( options.w_in, observed );
    std::ostringstream os;
    write_mask_file( os, mask );
    if ( options.out.has_parent_path() )
    {
      fs::create_directories( options.out.parent_path() );
    }
    write_file( options.out, os.str() );
    out << "observations: " << observed.size() << "\n";
    out << "care fraction: " << std::fixed << std::setprecision( 4 ) << care_fraction( mask ) << std::defaultfloat << " ("
        << mask.count_care() << " of " << mask.size() << ")\n";
    return exit_ok;
  } );
}

int cmd_batch( batch_options const& options, std::ostream& out, std::ostream& err )
{
  return guarded( err, [&] {
    if ( !fs::is_directory( options.dir ) )
    {
      throw usage_error( "'" + options.dir.string() + "' is not a directory" );
    }
    std::vector<fs::path> tables;
    for ( auto const& entry : fs::directory_iterator( options.dir ) )
    {
      if ( entry.is_regular_file() && entry.path().extension() == ".tbl" )
      {
        tables.push_back( entry.path() );
      }
    }
    if ( tables.empty() )
    {
      err << "error: no tables found in '" << options.dir.string() << "'\n";
      return exit_usage;
    }
    std::sort( tables.begin(), tables.end() );

    std::vector<table_outcome> outcomes( tables.size() );
    std::atomic<std::size_t> next{ 0 };
    auto per_table = options.search;
    per_table.threads = 1;

    auto worker = [&] {
      for ( auto i = next++; i < tables.size(); i = next++ )
      {
        auto& o = outcomes[i];
        o.name = tables[i].stem().string();
        try
        {
          auto mask_path = tables[i];
          mask_path.replace_extension( ".mask" );
          std::optional<fs::path> mask;
          if ( fs::exists( mask_path ) )
          {
            mask = mask_path;
          }
          search_config cfg;
          auto c = compress_files( tables[i], mask, per_table, cfg );
          c.document = render_document( o.name, tables[i], mask, c, cfg, options.json );
          write_outputs( options.out, o.name, c );
          auto const& chosen = c.result.report.configs.at( c.result.report.chosen );
          o.total_bits = chosen.total_bits;
          o.pluts = chosen.pluts;
          o.ust_before = chosen.ust_before;
          o.ust_after = chosen.ust_after;
          if ( options.compare )
          {
            auto all_care = cfg;
            all_care.dont_cares = false;
            auto const baseline = compress( c.input.table, c.mask, all_care );
            o.all_care_bits = baseline.report.configs.at( baseline.report.chosen ).total_bits;
          }
          o.ok = c.check.passed();
          o.status = o.ok ? exit_ok : exit_verify_failed;
          if ( !o.ok )
          {
            o.error = std::to_string( c.check.care_mismatches.size() ) + " care mismatches";
          }
        }
        catch ( std::exception const& e )
        {
          o.ok = false;
          o.status = exit_usage;
          o.error = e.what();
        }
      }
    };
    auto const workers = std::clamp<std::size_t>( options.search.threads, 1, tables.size() );
    if ( workers == 1 )
    {
      worker();
    }
    else
    {
      std::vector<std::jthread> pool;
      for ( std::size_t w = 0; w < workers; ++w )
      {
        pool.emplace_back( worker );
      }
    }

    std::uint64_t total_bits = 0, total_pluts = 0, total_all_care = 0;
    std::vector<double> ratios;
    int status = exit_ok;
    for ( auto const& o : outcomes )
    {
      if ( !o.ok )
      {
        status = std::max( status, o.status );
        continue;
      }
      total_bits += o.total_bits;
      total_pluts += o.pluts;
      if ( o.all_care_bits )
      {
        total_all_care += *o.all_care_bits;
        ratios.push_back( *o.all_care_bits == 0 ? 1.0
                                                : static_cast<double>( o.total_bits ) / static_cast<double>( *o.all_care_bits ) );
      }
    }

    std::optional<double> geomean_reduction, median_reduction;
    if ( options.compare && !ratios.empty() )
    {
      double log_sum = 0;
      for ( auto r : ratios )
        log_sum += std::log( r );
      geomean_reduction = 1.0 - std::exp( log_sum / static_cast<double>( ratios.size() ) );
      std::vector<double> reductions;
      for ( auto r : ratios )
        reductions.push_back( 1.0 - r );
      std::sort( reductions.begin(), reductions.end() );
      auto const k = reductions.size();
      median_reduction = k % 2 ? reductions[k / 2] : 0.5 * ( reductions[k / 2 - 1] + reductions[k / 2] );
    }

    std::string document;
    if ( options.json )
    {
      nlohmann::ordered_json j;
      auto& rows = j["tables"] = nlohmann::ordered_json::array();
      for ( auto const& o : outcomes )
      {
        nlohmann::ordered_json row;
        row["name"] = o.name;
        row["ok"] = o.ok;
        if ( !o.ok )
        {
          row["error"] = o.error;
        }
        else
        {
          row["total_bits"] = o.total_bits;
          row["pluts"] = o.pluts;
          row["ust_before"] = o.ust_before;
          row["ust_after"] = o.ust_after;
          if ( o.all_care_bits )
            row["all_care_bits"] = *o.all_care_bits;
        }
        rows.push_back( std::move( row ) );
      }
      j["total_bits"] = total_bits;
      j["total_pluts"] = total_pluts;
      if ( options.compare )
      {
        j["total_all_care_bits"] = total_all_care;
        j["geomean_reduction"] = geomean_reduction.value_or( 0.0 );
        j["median_reduction"] = median_reduction.value_or( 0.0 );
      }
      j["failed"] = static_cast<std::size_t>(
          std::count_if( outcomes.begin(), outcomes.end(), []( auto const& o ) { return !o.ok; } ) );
      document = j.dump( 2 ) + "\n";
    }
    else
    {
      std::ostringstream os;
      os << "dclut batch report: " << options.dir.string() << "\n";
      for ( auto const& o : outcomes )
      {
        if ( !o.ok )
        {
          os << "  " << o.name << ": FAILED: " << o.error << "\n";
          continue;
        }
        os << "  " << o.name << ": bits=" << o.total_bits << " pluts=" << o.pluts << " ust=" << o.ust_before << "->"
           << o.ust_after;
        if ( o.all_care_bits )
        {
          os << " all_care_bits=" << *o.all_care_bits;
        }
        os << "\n";
      }
      os << "total_bits: " << total_bits << "\n";
      os << "total_pluts: " << total_pluts << "\n";
      if ( options.compare )
      {
        os << "total_all_care_bits: " << total_all_care << "\n";
        os << std::fixed << std::setprecision( 4 );
        os << "geomean_reduction: " << geomean_reduction.value_or( 0.0 ) << "\n";
        os << "median_reduction: " << median_reduction.value_or( 0.0 ) << "\n";
      }
      document = os.str();
    }
    fs::create_directories( options.out );
    write_file( options.out / "aggregate.report", document );
    out << document;
    return status;
  } );
}

int cmd_verify( verify_options const& options, std::ostream& out, std::ostream& err )
{
  return guarded( err, [&] {
    auto const input = load_table( options.table, options.output_bits );
    auto const mask = load_mask( options.mask, input.table.size() );
    auto const text = read_file( options.plan );
    std::pair<plan, cost_report> loaded;
    try
    {
      loaded = load_plan_file( text );
    }
    catch ( parse_error const& e )
    {
      throw parse_error( e.line(), options.plan.string() + ": " + e.what() );
    }
    auto const report = verify_plan( input.table, mask, loaded.first );
    if ( options.json )
    {
      nlohmann::ordered_json j;
      j["passed"] = report.passed();
      j["care_mismatches"] = report.care_mismatches;
      j["total_checked"] = report.total_checked;
      j["dont_cares_changed"] = report.dont_cares_changed;
      out << j.dump( 2 ) << "\n";
    }
    else
    {
      out << ( report.passed() ? "PASS" : "FAIL" ) << ": " << report.care_mismatches.size() << " care mismatches over "
          << report.total_checked << " addresses, " << report.dont_cares_changed << " don't-care entries changed\n";
      for ( std::size_t i = 0; i < std::min<std::size_t>( report.care_mismatches.size(), 16 ); ++i )
      {
        auto const x = report.care_mismatches[i];
        out << "  address 0x" << std::hex << x << ": table 0x" << input.table[x] << ", plan 0x"
            << evaluate( loaded.first, x ) << std::dec << "\n";
      }
    }
    return report.passed() ? exit_ok : exit_verify_failed;
  } );
}

int cmd_generate( generate_options const& options, std::ostream& out, std::ostream& err )
{
  return guarded( err, [&] {
    std::mt19937_64 rng( options.seed );
    fs::create_directories( options.out );
    for ( unsigned i = 0; i < options.count; ++i )
    {
      auto const inst = planted_table( { options.w_in, options.w_out, options.w_lb_in, options.generators, options.dont_care }, rng );
      auto const stem = options.count == 1 ? options.name : options.name + "_" + std::to_string( i );
      std::ostringstream table_text, mask_text;
      write_table_file( table_text, inst.table );
      write_mask_file( mask_text, inst.mask );
      write_file( options.out / ( stem + ".tbl" ), table_text.str() );
      write_file( options.out / ( stem + ".mask" ), mask_text.str() );
      out << stem << ": " << inst.table.size() << " entries, care fraction " << std::fixed << std::setprecision( 4 )
          << care_fraction( inst.mask ) << std::defaultfloat << "\n";
    }
    return exit_ok;
  } );
}

namespace
{

void add_search_flags( CLI::App* cmd, search_flags& s, bool with_wout = true )
{
  if ( with_wout )
  {
    cmd->add_option( "--wout", s.output_bits, "Output width (default: bit-length of the largest value)" )
        ->check( CLI::Range( 1u, max_output_bits ) );
  }
  cmd->add_option( "--exiguity", s.exiguity, "Max dependents of a unique sub-table eligible for don't-care elimination" )
      ->capture_default_str();
  cmd->add_flag( "--no-hbs", s.no_hbs, "Disable the higher-bit / lower-bit split" );
  cmd->add_flag( "--no-ssc", s.no_ssc, "Disable self-similarity compression" );
  cmd->add_flag( "--no-dc", s.no_dc, "Disable don't-care optimization" );
  cmd->add_option( "--min-tsize", s.min_tsize, "Smallest sub-table address width (w_lb_in)" );
  cmd->add_option( "--max-tsize", s.max_tsize, "Largest sub-table address width (w_lb_in)" );
  cmd->add_option( "--passes", s.passes, "Traversals of the unique sub-table list per configuration" )->capture_default_str();
  cmd->add_option( "--threads", s.threads, "Worker threads" )->check( CLI::Range( 1u, 256u ) )->capture_default_str();
}

} // namespace

int run( int argc, char const* const* argv, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "dclut: lookup-table compression with don't-care optimization" };
  app.require_subcommand( 1 );

  compress_options compress_opts;
  auto* compress_cmd = app.add_subcommand( "compress", "Compress one table; writes <name>.v, <name>.plan, <name>.report" );
  compress_cmd->add_option( "--table", compress_opts.table, "Table file (hex, one value per line)" )->required();
  compress_cmd->add_option( "--mask", compress_opts.mask, "Mask file (0/1 per line); default: all care" );
  compress_cmd->add_option( "--out", compress_opts.out, "Output directory" )->capture_default_str();
  compress_cmd->add_option( "--name", compress_opts.name, "Output name (default: table file stem)" );
  compress_cmd->add_flag( "--json", compress_opts.json, "Machine-readable report" );
  std::uint64_t unused_seed = 0;
  compress_cmd->add_option( "--seed", unused_seed, "Accepted for symmetry with generate; compression is seed-free" );
  add_search_flags( compress_cmd, compress_opts.search );

  mask_options mask_opts;
  auto* mask_cmd = app.add_subcommand( "mask", "Build a care mask from observed addresses" );
  mask_cmd->add_option( "--observations", mask_opts.observations, "Observation file" )->required();
  mask_cmd->add_option( "--win", mask_opts.w_in, "Table input width" )->required();
  mask_cmd->add_option( "--out", mask_opts.out, "Mask file to write" )->required();

  batch_options batch_opts;
  auto* batch_cmd = app.add_subcommand( "batch", "Compress every <stem>.tbl (+ optional <stem>.mask) in a directory" );
  batch_cmd->add_option( "--dir", batch_opts.dir, "Input directory" )->required();
  batch_cmd->add_option( "--out", batch_opts.out, "Output directory" )->capture_default_str();
  batch_cmd->add_flag( "--compare", batch_opts.compare, "Also run all-care mode and report the reduction" );
  batch_cmd->add_flag( "--json", batch_opts.json, "Machine-readable reports" );
  add_search_flags( batch_cmd, batch_opts.search );

  verify_options verify_opts;
  auto* verify_cmd = app.add_subcommand( "verify", "Check a plan file against a table and mask" );
  verify_cmd->add_option( "--table", verify_opts.table, "Table file" )->required();
  verify_cmd->add_option( "--mask", verify_opts.mask, "Mask file; default: all care" );
  verify_cmd->add_option( "--plan", verify_opts.plan, "Plan file" )->required();
  verify_cmd->add_option( "--wout", verify_opts.output_bits, "Output width" );
  verify_cmd->add_flag( "--json", verify_opts.json, "Machine-readable result" );

  generate_options gen_opts;
  auto* gen_cmd = app.add_subcommand( "generate", "Write synthetic tables with planted shift structure and masks" );
  gen_cmd->add_option( "--win", gen_opts.w_in, "Input width" )->capture_default_str();
  gen_cmd->add_option( "--wout", gen_opts.w_out, "Output width" )->capture_default_str();
  gen_cmd->add_option( "--sub-bits", gen_opts.w_lb_in, "Planted sub-table address width" )->capture_default_str();
  gen_cmd->add_option( "--generators", gen_opts.generators, "Distinct base sub-tables" )->capture_default_str();
  gen_cmd->add_option( "--dontcare", gen_opts.dont_care, "Don't-care fraction" )->check( CLI::Range( 0.0, 1.0 ) )->capture_default_str();
  gen_cmd->add_option( "--seed", gen_opts.seed, "Random seed" )->capture_default_str();
  gen_cmd->add_option( "--count", gen_opts.count, "Number of tables" )->capture_default_str();
  gen_cmd->add_option( "--out", gen_opts.out, "Output directory" )->capture_default_str();
  gen_cmd->add_option( "--name", gen_opts.name, "File stem" )->capture_default_str();

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    return app.exit( e, out, err ) == 0 ? exit_ok : exit_usage;
  }

  if ( *compress_cmd )
    return cmd_compress( compress_opts, out, err );
  if ( *mask_cmd )
    return cmd_mask( mask_opts, out, err );
  if ( *batch_cmd )
    return cmd_batch( batch_opts, out, err );
  if ( *verify_cmd )
    return cmd_verify( verify_opts, out, err );
  return cmd_generate( gen_opts, out, err );
}

} // namespace dclut::cli
