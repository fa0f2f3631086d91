#include <dclut/table_io.hpp>

#include <dclut/errors.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace dclut
{

std::string loaded_table::describe() const
{
  std::ostringstream os;
  os << "w_in=" << table.input_bits() << " (from " << lines << " lines), w_out=" << table.output_bits();
  if ( output_bits_inferred )
  {
    os << " (inferred from max value 0x" << std::hex << max_value << std::dec << ")";
  }
  else
  {
    os << " (given)";
  }
  return os.str();
}

loaded_table read_table_file( std::istream& in, std::optional<unsigned> output_bits, unsigned max_input_bits )
{
  std::vector<std::uint64_t> values;
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    std::string_view text( line );
    if ( auto hash = text.find( '#' ); hash != std::string_view::npos )
    {
      text = text.substr( 0, hash );
    }
    auto const first = text.find_first_not_of( " \t\r" );
    if ( first == std::string_view::npos )
    {
      continue;
    }
    text = text.substr( first, text.find_last_not_of( " \t\r" ) - first + 1 );
    if ( text.starts_with( "0x" ) || text.starts_with( "0X" ) )
    {
      text.remove_prefix( 2 );
    }
    std::uint64_t value = 0;
    auto const [ptr, ec] = std::from_chars( text.data(), text.data() + text.size(), value, 16 );
    if ( text.empty() || ec != std::errc{} || ptr != text.data() + text.size() )
    {
      throw parse_error( line_no, "malformed hexadecimal value '" + std::string( text ) + "'" );
    }
    values.push_back( value );
  }

  if ( values.size() < 2 || !std::has_single_bit( values.size() ) )
  {
    throw parse_error( 0, "table has " + std::to_string( values.size() ) + " values; expected a power of two (at least 2)" );
  }

  loaded_table result;
  result.lines = values.size();
  result.max_value = *std::max_element( values.begin(), values.end() );
  auto const w_in = static_cast<unsigned>( std::countr_zero( values.size() ) );
  unsigned w_out = 0;
  if ( output_bits )
  {
    w_out = *output_bits;
  }
  else
  {
    w_out = std::max( 1u, bit_length( result.max_value ) );
    result.output_bits_inferred = true;
  }
  result.table = lookup_table( w_in, w_out, std::move( values ), max_input_bits );
  return result;
}

void write_table_file( std::ostream& out, lookup_table const& table )
{
  out << std::hex;
  for ( auto v : table.values() )
  {
    out << v << '\n';
  }
  out << std::dec;
}

} // namespace dclut
