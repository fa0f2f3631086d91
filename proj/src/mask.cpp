#include <dclut/mask.hpp>

#include <dclut/errors.hpp>

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace dclut
{

care_mask::care_mask( std::vector<std::uint8_t> flags )
    : flags_( std::move( flags ) )
{
  for ( auto& f : flags_ )
  {
    f = f != 0 ? 1u : 0u;
  }
}

care_mask care_mask::all_care( std::size_t size )
{
  return care_mask( std::vector<std::uint8_t>( size, 1u ) );
}

care_mask care_mask::all_dont_care( std::size_t size )
{
  return care_mask( std::vector<std::uint8_t>( size, 0u ) );
}

std::size_t care_mask::count_care() const noexcept
{
  return static_cast<std::size_t>( std::count( flags_.begin(), flags_.end(), std::uint8_t{ 1 } ) );
}

care_mask mask_from_observations( unsigned w_in, std::span<std::uint64_t const> observed )
{
  auto const size = std::size_t{ 1 } << w_in;
  std::vector<std::uint8_t> flags( size, 0u );
  for ( std::size_t i = 0; i < observed.size(); ++i )
  {
    if ( observed[i] >= size )
    {
      throw address_error( "observation " + std::to_string( i + 1 ) + ": address " + std::to_string( observed[i] ) +
                           " does not fit in " + std::to_string( w_in ) + " bits" );
    }
    flags[observed[i]] = 1u;
  }
  return care_mask( std::move( flags ) );
}

double care_fraction( care_mask const& mask ) noexcept
{
  if ( mask.size() == 0 )
  {
    return 0.0;
  }
  return static_cast<double>( mask.count_care() ) / static_cast<double>( mask.size() );
}

namespace
{

std::string_view strip( std::string_view s )
{
  auto const hash = s.find( '#' );
  if ( hash != std::string_view::npos )
  {
    s = s.substr( 0, hash );
  }
  auto const first = s.find_first_not_of( " \t\r" );
  if ( first == std::string_view::npos )
  {
    return {};
  }
  auto const last = s.find_last_not_of( " \t\r" );
  return s.substr( first, last - first + 1 );
}

} // namespace

std::vector<std::uint64_t> read_observations( std::istream& in, unsigned w_in )
{
  auto const size = std::uint64_t{ 1 } << w_in;
  std::vector<std::uint64_t> addresses;
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    auto const text = strip( line );
    if ( text.empty() )
    {
      continue;
    }
    std::uint64_t value = 0;
    if ( text.starts_with( "0x" ) || text.starts_with( "0X" ) )
    {
      auto const digits = text.substr( 2 );
      auto const [ptr, ec] = std::from_chars( digits.data(), digits.data() + digits.size(), value, 16 );
      if ( digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() )
      {
        throw parse_error( line_no, "malformed hexadecimal address '" + std::string( text ) + "'" );
      }
    }
    else
    {
      if ( text.size() != w_in || text.find_first_not_of( "01" ) != std::string_view::npos )
      {
        throw parse_error( line_no, "expected " + std::to_string( w_in ) + " binary digits, got '" + std::string( text ) + "'" );
      }
      std::from_chars( text.data(), text.data() + text.size(), value, 2 );
    }
    if ( value >= size )
    {
      throw parse_error( line_no, "address " + std::string( text ) + " out of range for " + std::to_string( w_in ) + " input bits" );
    }
    addresses.push_back( value );
  }
  return addresses;
}

care_mask read_mask_file( std::istream& in, std::size_t expected_size )
{
  std::vector<std::uint8_t> flags;
  flags.reserve( expected_size );
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    auto const text = strip( line );
    if ( text.empty() )
    {
      continue;
    }
    if ( text != "0" && text != "1" )
    {
      throw parse_error( line_no, "mask entries must be 0 or 1, got '" + std::string( text ) + "'" );
    }
    flags.push_back( text == "1" ? 1u : 0u );
  }
  if ( flags.size() != expected_size )
  {
    throw usage_error( "mask has " + std::to_string( flags.size() ) + " entries but table has " + std::to_string( expected_size ) );
  }
  return care_mask( std::move( flags ) );
}

void write_mask_file( std::ostream& out, care_mask const& mask )
{
  for ( auto f : mask.flags() )
  {
    out << ( f ? '1' : '0' ) << '\n';
  }
}

} // namespace dclut
