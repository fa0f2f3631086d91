#include <dclut/emit.hpp>

#include <dclut/errors.hpp>

#include <json.hpp>

#include <charconv>
#include <iomanip>
#include <sstream>
#include <vector>

namespace dclut
{

bool is_verilog_identifier( std::string_view name ) noexcept
{
  if ( name.empty() )
    return false;
  auto alpha = []( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || c == '_'; };
  auto digit = []( char c ) { return c >= '0' && c <= '9'; };
  if ( !alpha( name.front() ) )
    return false;
  for ( auto c : name )
    if ( !alpha( c ) && !digit( c ) )
      return false;
  return true;
}

namespace
{

std::string literal( unsigned width, std::uint64_t value )
{
  std::ostringstream os;
  os << width << "'h" << std::hex << value;
  return os.str();
}

std::string range( unsigned width )
{
  return "[" + std::to_string( width - 1 ) + ":0]";
}

/* `reg [width-1:0] name` driven by a full case statement over `select` */
void emit_rom( std::ostringstream& os, std::string const& name, unsigned width, std::string const& select,
               unsigned select_width, std::span<std::uint64_t const> entries )
{
  os << "  reg " << range( width ) << " " << name << ";\n";
  os << "  always @(*) begin\n";
  os << "    case (" << select << ")\n";
  for ( std::size_t a = 0; a < entries.size(); ++a )
  {
    os << "      " << literal( select_width, a ) << ": " << name << " = " << literal( width, entries[a] ) << ";\n";
  }
  os << "      default: " << name << " = " << literal( width, 0 ) << ";\n";
  os << "    endcase\n";
  os << "  end\n\n";
}

} // namespace

std::string emit_verilog( plan const& p, std::string_view module_name )
{
  if ( !is_verilog_identifier( module_name ) )
  {
    throw usage_error( "invalid Verilog module name '" + std::string( module_name ) + "'" );
  }

  std::ostringstream os;
  auto const w_in = p.input_bits();
  auto const w_out = p.output_bits();
  os << "// generated by dclut\n";
  os << "module " << module_name << " (\n";
  os << "  input  wire " << range( w_in ) << " address,\n";
  os << "  output wire " << range( w_out ) << " data\n";
  os << ");\n\n";

  if ( p.is_plain() )
  {
    emit_rom( os, "rom", w_out, "address", w_in, p.plain().values() );
    os << "  assign data = rom;\n\n";
    os << "endmodule\n";
    return os.str();
  }

  auto const& d = p.compressed();
  auto const hb = d.high_bits_width();
  auto const hb_addr = d.w_in - d.w_lb_in;
  auto const idx_w = index_bits( d );
  auto const rsh_w = shift_bits( d );

  if ( hb_addr > 0 )
  {
    os << "  wire " << range( hb_addr ) << " x_hb = address[" << d.w_in - 1 << ":" << d.w_lb_in << "];\n";
  }
  if ( d.w_lb_in > 0 )
  {
    os << "  wire " << range( d.w_lb_in ) << " x_lb = address[" << d.w_lb_in - 1 << ":0];\n";
  }
  os << "\n";

  if ( hb_addr > 0 )
  {
    emit_rom( os, "t_bias", hb, "x_hb", hb_addr, d.t_bias );
  }
  else
  {
    os << "  wire " << range( hb ) << " t_bias = " << literal( hb, d.t_bias[0] ) << ";\n\n";
  }

  std::string shifted;
  if ( d.w_st > 0 )
  {
    if ( idx_w > 0 )
    {
      emit_rom( os, "t_idx", idx_w, "x_hb", hb_addr, d.t_idx );
    }

    std::string ust_addr;
    unsigned ust_addr_w = idx_w + d.w_lb_in;
    if ( idx_w > 0 && d.w_lb_in > 0 )
    {
      os << "  wire " << range( ust_addr_w ) << " ust_addr = {t_idx, x_lb};\n\n";
      ust_addr = "ust_addr";
    }
    else if ( idx_w > 0 )
    {
      ust_addr = "t_idx";
    }
    else if ( d.w_lb_in > 0 )
    {
      ust_addr = "x_lb";
    }

    if ( ust_addr.empty() )
    {
      os << "  wire " << range( d.w_st ) << " t_ust = " << literal( d.w_st, d.t_ust[0] ) << ";\n\n";
    }
    else
    {
      emit_rom( os, "t_ust", d.w_st, ust_addr, ust_addr_w, d.t_ust );
    }

    if ( rsh_w > 0 )
    {
      emit_rom( os, "t_rsh", rsh_w, "x_hb", hb_addr, d.t_rsh );
      shifted = "(t_ust >> t_rsh)";
    }
    else if ( d.t_rsh[0] > 0 )
    {
      shifted = "(t_ust >> " + std::to_string( d.t_rsh[0] ) + ")";
    }
    else
    {
      shifted = "t_ust";
    }
  }

  os << "  wire " << range( hb ) << " hb = " << ( shifted.empty() ? "t_bias" : shifted + " + t_bias" ) << ";\n\n";

  if ( d.w_lb_out > 0 )
  {
    emit_rom( os, "t_lb", d.w_lb_out, "address", d.w_in, d.t_lb );
    os << "  assign data = {hb, t_lb};\n\n";
  }
  else
  {
    os << "  assign data = hb;\n\n";
  }
  os << "endmodule\n";
  return os.str();
}

/* plan files */

namespace
{

void write_table( std::ostringstream& os, std::string_view name, std::span<std::uint64_t const> values )
{
  os << "table " << name << " " << values.size() << "\n";
  os << std::hex;
  for ( std::size_t i = 0; i < values.size(); ++i )
  {
    os << values[i] << ( ( i % 16 == 15 || i + 1 == values.size() ) ? '\n' : ' ' );
  }
  os << std::dec;
}

void write_entry( std::ostringstream& os, config_cost const& c )
{
  os << "entry kind=" << ( c.plain ? "plain" : "compressed" ) << " w_lb_in=" << c.w_lb_in << " w_lb_out=" << c.w_lb_out
     << " plain=" << c.bits.plain << " lb=" << c.bits.lb << " bias=" << c.bits.bias << " idx=" << c.bits.idx
     << " rsh=" << c.bits.rsh << " ust=" << c.bits.ust << " total=" << c.total_bits << " pluts=" << c.pluts
     << " ust_before=" << c.ust_before << " ust_after=" << c.ust_after << " reduced_kept=" << ( c.reduced_kept ? 1 : 0 )
     << "\n";
}

class plan_reader
{
public:
  explicit plan_reader( std::string_view text )
  {
    std::size_t start = 0;
    while ( start < text.size() )
    {
      auto end = text.find( '\n', start );
      if ( end == std::string_view::npos )
      {
        end = text.size();
      }
      lines_.push_back( text.substr( start, end - start ) );
      start = end + 1;
    }
  }

  std::size_t line() const noexcept { return pos_; }

  /* tokens of the next line, which must start with `keyword` */
  std::vector<std::string_view> expect( std::string_view keyword, std::string_view section )
  {
    if ( pos_ >= lines_.size() )
    {
      throw parse_error( lines_.size() + 1, "unexpected end of file: missing section '" + std::string( section ) + "'" );
    }
    auto tokens = split( lines_[pos_++] );
    if ( tokens.empty() || tokens[0] != keyword )
    {
      throw parse_error( pos_, "expected '" + std::string( keyword ) + "'" );
    }
    return tokens;
  }

  std::string_view raw_next( std::string_view section )
  {
    if ( pos_ >= lines_.size() )
    {
      throw parse_error( lines_.size() + 1, "unexpected end of file inside section '" + std::string( section ) + "'" );
    }
    return lines_[pos_++];
  }

  bool at_end() const noexcept { return pos_ >= lines_.size(); }

  static std::vector<std::string_view> split( std::string_view line )
  {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while ( i < line.size() )
    {
      while ( i < line.size() && ( line[i] == ' ' || line[i] == '\r' ) )
        ++i;
      auto const start = i;
      while ( i < line.size() && line[i] != ' ' && line[i] != '\r' )
        ++i;
      if ( i > start )
        tokens.push_back( line.substr( start, i - start ) );
    }
    return tokens;
  }

  std::uint64_t number( std::string_view token, int base = 10 ) const
  {
    std::uint64_t value = 0;
    auto const [ptr, ec] = std::from_chars( token.data(), token.data() + token.size(), value, base );
    if ( token.empty() || ec != std::errc{} || ptr != token.data() + token.size() )
    {
      throw parse_error( pos_, "malformed number '" + std::string( token ) + "'" );
    }
    return value;
  }

  unsigned small( std::string_view token ) const
  {
    auto const v = number( token );
    if ( v > 64 )
    {
      throw parse_error( pos_, "width " + std::string( token ) + " out of range" );
    }
    return static_cast<unsigned>( v );
  }

  unsigned field( std::string_view keyword )
  {
    auto tokens = expect( keyword, keyword );
    if ( tokens.size() != 2 )
    {
      throw parse_error( pos_, "expected '" + std::string( keyword ) + " <value>'" );
    }
    return small( tokens[1] );
  }

  std::vector<std::uint64_t> table( std::string_view name )
  {
    auto const section = "table " + std::string( name );
    auto tokens = expect( "table", section );
    if ( tokens.size() != 3 || tokens[1] != name )
    {
      throw parse_error( pos_, "expected '" + section + " <count>'" );
    }
    auto const count = number( tokens[2] );
    if ( count > ( std::uint64_t{ 1 } << 30 ) )
    {
      throw parse_error( pos_, "table too large" );
    }
    std::vector<std::uint64_t> values;
    values.reserve( count );
    while ( values.size() < count )
    {
      auto const line = raw_next( section );
      auto const row = split( line );
      auto const want = std::min<std::size_t>( 16, count - values.size() );
      if ( row.size() != want )
      {
        throw parse_error( pos_, "expected " + std::to_string( want ) + " values in " + section );
      }
      for ( auto t : row )
      {
        values.push_back( number( t, 16 ) );
      }
    }
    return values;
  }

  std::uint64_t keyed( std::string_view token, std::string_view key ) const
  {
    if ( !token.starts_with( key ) || token.size() <= key.size() || token[key.size()] != '=' )
    {
      throw parse_error( pos_, "expected '" + std::string( key ) + "=' field" );
    }
    return number( token.substr( key.size() + 1 ) );
  }

private:
  std::vector<std::string_view> lines_;
  std::size_t pos_{ 0 };
};

} // namespace

std::string emit_plan_file( plan const& p, cost_report const& report )
{
  std::ostringstream os;
  os << "dclut-plan 1\n";
  os << "kind " << ( p.is_plain() ? "plain" : "compressed" ) << "\n";
  os << "w_in " << p.input_bits() << "\n";
  os << "w_out " << p.output_bits() << "\n";
  os << "config " << p.config().w_lb_in << " " << p.config().w_lb_out << " " << p.config().exiguity << "\n";
  if ( p.is_plain() )
  {
    write_table( os, "values", p.plain().values() );
  }
  else
  {
    auto const& d = p.compressed();
    os << "w_lb_in " << d.w_lb_in << "\n";
    os << "w_lb_out " << d.w_lb_out << "\n";
    os << "w_st " << d.w_st << "\n";
    write_table( os, "t_lb", d.t_lb );
    write_table( os, "t_bias", d.t_bias );
    write_table( os, "t_idx", d.t_idx );
    write_table( os, "t_rsh", d.t_rsh );
    write_table( os, "t_ust", d.t_ust );
  }
  os << "report " << report.configs.size() << " " << report.chosen << "\n";
  for ( auto const& c : report.configs )
  {
    write_entry( os, c );
  }
  os << "end\n";
  return os.str();
}

std::pair<plan, cost_report> load_plan_file( std::string_view text )
{
  plan_reader in( text );

  auto header = in.expect( "dclut-plan", "dclut-plan" );
  if ( header.size() != 2 || header[1] != "1" )
  {
    throw parse_error( in.line(), "unsupported plan file version" );
  }
  auto kind = in.expect( "kind", "kind" );
  if ( kind.size() != 2 || ( kind[1] != "plain" && kind[1] != "compressed" ) )
  {
    throw parse_error( in.line(), "kind must be 'plain' or 'compressed'" );
  }
  bool const plain = kind[1] == "plain";
  auto const w_in = in.field( "w_in" );
  auto const w_out = in.field( "w_out" );
  auto cfg_tokens = in.expect( "config", "config" );
  if ( cfg_tokens.size() != 4 )
  {
    throw parse_error( in.line(), "expected 'config <w_lb_in> <w_lb_out> <exiguity>'" );
  }
  plan_config cfg{ in.small( cfg_tokens[1] ), in.small( cfg_tokens[2] ), in.number( cfg_tokens[3] ) };

  std::optional<plan> body;
  try
  {
    if ( plain )
    {
      auto values = in.table( "values" );
      body.emplace( lookup_table( w_in, w_out, std::move( values ), w_in ), cfg );
    }
    else
    {
      decomposition d;
      d.w_in = w_in;
      d.w_out = w_out;
      d.w_lb_in = in.field( "w_lb_in" );
      d.w_lb_out = in.field( "w_lb_out" );
      d.w_st = in.field( "w_st" );
      d.t_lb = in.table( "t_lb" );
      d.t_bias = in.table( "t_bias" );
      d.t_idx = in.table( "t_idx" );
      d.t_rsh = in.table( "t_rsh" );
      d.t_ust = in.table( "t_ust" );
      body.emplace( std::move( d ), cfg );
    }
  }
  catch ( invariant_error const& e )
  {
    throw parse_error( in.line(), std::string( "inconsistent plan: " ) + e.what() );
  }
  catch ( usage_error const& e )
  {
    throw parse_error( in.line(), std::string( "inconsistent plan: " ) + e.what() );
  }

  cost_report report;
  auto rep = in.expect( "report", "report" );
  if ( rep.size() != 3 )
  {
    throw parse_error( in.line(), "expected 'report <entries> <chosen>'" );
  }
  auto const entries = in.number( rep[1] );
  report.chosen = in.number( rep[2] );
  for ( std::uint64_t i = 0; i < entries; ++i )
  {
    auto t = in.expect( "entry", "entry" );
    if ( t.size() != 15 )
    {
      throw parse_error( in.line(), "report entry has " + std::to_string( t.size() - 1 ) + " fields, expected 14" );
    }
    config_cost c;
    if ( t[1] == "kind=plain" )
      c.plain = true;
    else if ( t[1] != "kind=compressed" )
      throw parse_error( in.line(), "bad entry kind" );
    c.w_lb_in = static_cast<unsigned>( in.keyed( t[2], "w_lb_in" ) );
    c.w_lb_out = static_cast<unsigned>( in.keyed( t[3], "w_lb_out" ) );
    c.bits.plain = in.keyed( t[4], "plain" );
    c.bits.lb = in.keyed( t[5], "lb" );
    c.bits.bias = in.keyed( t[6], "bias" );
    c.bits.idx = in.keyed( t[7], "idx" );
    c.bits.rsh = in.keyed( t[8], "rsh" );
    c.bits.ust = in.keyed( t[9], "ust" );
    c.total_bits = in.keyed( t[10], "total" );
    c.pluts = in.keyed( t[11], "pluts" );
    c.ust_before = in.keyed( t[12], "ust_before" );
    c.ust_after = in.keyed( t[13], "ust_after" );
    c.reduced_kept = in.keyed( t[14], "reduced_kept" ) != 0;
    if ( c.total_bits != c.bits.total() )
    {
      throw parse_error( in.line(), "entry total does not equal the sum of its components" );
    }
    report.configs.push_back( c );
  }
  if ( report.chosen >= std::max<std::size_t>( 1, report.configs.size() ) )
  {
    throw parse_error( in.line(), "chosen entry out of range" );
  }
  auto end = in.expect( "end", "end" );
  if ( end.size() != 1 || !in.at_end() )
  {
    throw parse_error( in.line(), "trailing content after 'end'" );
  }
  return { std::move( *body ), std::move( report ) };
}

/* reports */

std::string render_report_text( cost_report const& report )
{
  std::ostringstream os;
  os << "  #  kind        w_lb_in w_lb_out      plain       lb     bias      idx      rsh      ust      total    pluts  ust\n";
  for ( std::size_t i = 0; i < report.configs.size(); ++i )
  {
    auto const& c = report.configs[i];
    os << ( i == report.chosen ? "* " : "  " ) << std::setw( 2 ) << i << "  " << std::left << std::setw( 10 )
       << ( c.plain ? "plain" : "compressed" ) << std::right << std::setw( 8 ) << c.w_lb_in << std::setw( 9 )
       << c.w_lb_out << std::setw( 11 ) << c.bits.plain << std::setw( 9 ) << c.bits.lb << std::setw( 9 ) << c.bits.bias
       << std::setw( 9 ) << c.bits.idx << std::setw( 9 ) << c.bits.rsh << std::setw( 9 ) << c.bits.ust << std::setw( 11 )
       << c.total_bits << std::setw( 9 ) << c.pluts;
    if ( c.plain )
    {
      os << "  -";
    }
    else
    {
      os << "  " << c.ust_before << "->" << c.ust_after << ( c.reduced_kept ? " (kept)" : "" );
    }
    os << "\n";
  }
  auto const& best = report.configs.at( report.chosen );
  os << "chosen: #" << report.chosen << " " << ( best.plain ? "plain" : "compressed" ) << " w_lb_in=" << best.w_lb_in
     << " w_lb_out=" << best.w_lb_out << " total_bits=" << best.total_bits << " pluts=" << best.pluts << "\n";
  return os.str();
}

std::string render_report_json( cost_report const& report, int indent )
{
  nlohmann::ordered_json j;
  j["chosen"] = report.chosen;
  auto& configs = j["configs"] = nlohmann::ordered_json::array();
  for ( auto const& c : report.configs )
  {
    nlohmann::ordered_json e;
    e["kind"] = c.plain ? "plain" : "compressed";
    e["w_lb_in"] = c.w_lb_in;
    e["w_lb_out"] = c.w_lb_out;
    e["bits"] = { { "plain", c.bits.plain }, { "lb", c.bits.lb },   { "bias", c.bits.bias },
                  { "idx", c.bits.idx },     { "rsh", c.bits.rsh }, { "ust", c.bits.ust } };
    e["total_bits"] = c.total_bits;
    e["pluts"] = c.pluts;
    e["ust_before"] = c.ust_before;
    e["ust_after"] = c.ust_after;
    e["reduced_kept"] = c.reduced_kept;
    configs.push_back( std::move( e ) );
  }
  return j.dump( indent );
}

} // namespace dclut
