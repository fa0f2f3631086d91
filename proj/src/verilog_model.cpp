#include <dclut/verilog_model.hpp>

#include <dclut/errors.hpp>

#include <cctype>
#include <charconv>
#include <string>
#include <unordered_map>
#include <vector>

namespace dclut
{

namespace
{

struct token
{
  enum class kind
  {
    ident,
    number,
    punct,
    end
  } type;
  std::string text;
  std::size_t line;
};

std::vector<token> tokenize( std::string_view src )
{
  std::vector<token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while ( i < src.size() )
  {
    char const c = src[i];
    if ( c == '\n' )
    {
      ++line;
      ++i;
    }
    else if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      ++i;
    }
    else if ( src.substr( i, 2 ) == "//" )
    {
      while ( i < src.size() && src[i] != '\n' )
        ++i;
    }
    else if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      auto const start = i;
      while ( i < src.size() && ( std::isalnum( static_cast<unsigned char>( src[i] ) ) || src[i] == '_' ) )
        ++i;
      out.push_back( { token::kind::ident, std::string( src.substr( start, i - start ) ), line } );
    }
    else if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      auto const start = i;
      while ( i < src.size() && std::isdigit( static_cast<unsigned char>( src[i] ) ) )
        ++i;
      if ( i < src.size() && src[i] == '\'' )
      {
        i += 2; // quote and base letter
        while ( i < src.size() && ( std::isxdigit( static_cast<unsigned char>( src[i] ) ) || src[i] == '_' ) )
          ++i;
      }
      out.push_back( { token::kind::number, std::string( src.substr( start, i - start ) ), line } );
    }
    else if ( src.substr( i, 2 ) == ">>" )
    {
      out.push_back( { token::kind::punct, ">>", line } );
      i += 2;
    }
    else if ( std::string_view( "()[]{}:;,=+@*" ).find( c ) != std::string_view::npos )
    {
      out.push_back( { token::kind::punct, std::string( 1, c ), line } );
      ++i;
    }
    else
    {
      throw parse_error( line, std::string( "unexpected character '" ) + c + "'" );
    }
  }
  out.push_back( { token::kind::end, "", line } );
  return out;
}

std::uint64_t width_mask( unsigned width )
{
  return width >= 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << width ) - 1;
}

struct expr
{
  enum class op
  {
    signal,
    slice,
    literal,
    concat,
    add,
    shr
  } kind;
  unsigned width{ 0 };
  std::size_t signal{ 0 };
  unsigned lo{ 0 };
  std::uint64_t value{ 0 };
  std::vector<expr> args{};
};

struct case_rom
{
  std::unordered_map<std::uint64_t, std::uint64_t> entries;
  std::uint64_t fallback{ 0 };
  bool has_default{ false };
};

struct statement
{
  std::size_t target;
  expr value;
  bool is_case{ false };
  case_rom rom{};
};

} // namespace

struct verilog_model::impl
{
  std::vector<std::string> names;
  std::vector<unsigned> widths;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<statement> program;
  std::size_t address{ 0 };
  std::size_t data{ 0 };

  std::vector<token> toks;
  std::size_t pos{ 0 };

  token const& peek() const { return toks[pos]; }
  token const& next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }

  [[noreturn]] void fail( std::string const& what ) const { throw parse_error( peek().line, "verilog: " + what ); }

  void expect( std::string_view text )
  {
    if ( peek().text != text || peek().type == token::kind::end )
      fail( "expected '" + std::string( text ) + "' but found '" + peek().text + "'" );
    next();
  }

  bool accept( std::string_view text )
  {
    if ( peek().type != token::kind::end && peek().text == text )
    {
      next();
      return true;
    }
    return false;
  }

  std::string identifier()
  {
    if ( peek().type != token::kind::ident )
      fail( "expected identifier but found '" + peek().text + "'" );
    return next().text;
  }

  std::uint64_t plain_number()
  {
    if ( peek().type != token::kind::number || peek().text.find( '\'' ) != std::string::npos )
      fail( "expected decimal number" );
    return std::stoull( next().text );
  }

  /* [hi:lo] with lo == 0, returns width */
  unsigned declared_range()
  {
    expect( "[" );
    auto const hi = plain_number();
    expect( ":" );
    auto const lo = plain_number();
    expect( "]" );
    if ( lo != 0 || hi >= 64 )
      fail( "only [N:0] ranges up to 64 bits are supported" );
    return static_cast<unsigned>( hi + 1 );
  }

  std::size_t declare( std::string const& name, unsigned width )
  {
    if ( index.contains( name ) )
      fail( "duplicate declaration of '" + name + "'" );
    index[name] = names.size();
    names.push_back( name );
    widths.push_back( width );
    return names.size() - 1;
  }

  std::size_t lookup( std::string const& name ) const
  {
    auto it = index.find( name );
    if ( it == index.end() )
      fail( "undeclared identifier '" + name + "'" );
    return it->second;
  }

  expr literal_token()
  {
    auto const text = next().text;
    expr e{ expr::op::literal };
    auto const quote = text.find( '\'' );
    if ( quote == std::string::npos )
    {
      e.value = std::stoull( text );
      e.width = 32;
      return e;
    }
    e.width = static_cast<unsigned>( std::stoul( text.substr( 0, quote ) ) );
    if ( e.width == 0 || e.width > 64 || quote + 1 >= text.size() )
      fail( "bad sized literal '" + text + "'" );
    int base = 0;
    switch ( text[quote + 1] )
    {
    case 'h':
    case 'H':
      base = 16;
      break;
    case 'd':
    case 'D':
      base = 10;
      break;
    case 'b':
    case 'B':
      base = 2;
      break;
    default:
      fail( "unsupported literal base in '" + text + "'" );
    }
    std::string digits;
    for ( auto ch : text.substr( quote + 2 ) )
      if ( ch != '_' )
        digits.push_back( ch );
    auto const [ptr, ec] = std::from_chars( digits.data(), digits.data() + digits.size(), e.value, base );
    if ( digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() )
      fail( "bad literal '" + text + "'" );
    if ( e.value > width_mask( e.width ) )
      fail( "literal '" + text + "' wider than its size" );
    return e;
  }

  expr primary()
  {
    if ( accept( "(" ) )
    {
      auto e = expression();
      expect( ")" );
      return e;
    }
    if ( accept( "{" ) )
    {
      expr e{ expr::op::concat };
      do
      {
        e.args.push_back( expression() );
        e.width += e.args.back().width;
      } while ( accept( "," ) );
      expect( "}" );
      if ( e.width > 64 )
        fail( "concatenation wider than 64 bits" );
      return e;
    }
    if ( peek().type == token::kind::number )
    {
      return literal_token();
    }
    auto const id = lookup( identifier() );
    if ( accept( "[" ) )
    {
      expr e{ expr::op::slice };
      e.signal = id;
      auto const hi = plain_number();
      expect( ":" );
      auto const lo = plain_number();
      expect( "]" );
      if ( hi < lo || hi >= widths[id] )
        fail( "part select out of range" );
      e.lo = static_cast<unsigned>( lo );
      e.width = static_cast<unsigned>( hi - lo + 1 );
      return e;
    }
    expr e{ expr::op::signal };
    e.signal = id;
    e.width = widths[id];
    return e;
  }

  expr additive()
  {
    auto lhs = primary();
    while ( accept( "+" ) )
    {
      expr e{ expr::op::add };
      auto rhs = primary();
      e.width = std::max( lhs.width, rhs.width );
      e.args.push_back( std::move( lhs ) );
      e.args.push_back( std::move( rhs ) );
      lhs = std::move( e );
    }
    return lhs;
  }

  expr expression()
  {
    auto lhs = additive();
    while ( accept( ">>" ) )
    {
      expr e{ expr::op::shr };
      auto rhs = additive();
      e.width = lhs.width;
      e.args.push_back( std::move( lhs ) );
      e.args.push_back( std::move( rhs ) );
      lhs = std::move( e );
    }
    return lhs;
  }

  std::uint64_t constant( expr const& e ) const
  {
    if ( e.kind != expr::op::literal )
      fail( "case items must assign constants" );
    return e.value;
  }

  void always_block()
  {
    expect( "@" );
    expect( "(" );
    expect( "*" );
    expect( ")" );
    expect( "begin" );
    expect( "case" );
    expect( "(" );
    statement st;
    st.is_case = true;
    st.value = expression();
    expect( ")" );
    std::string target;
    while ( !accept( "endcase" ) )
    {
      bool const is_default = accept( "default" );
      std::uint64_t label = 0;
      if ( !is_default )
        label = literal_token().value;
      expect( ":" );
      auto const name = identifier();
      if ( target.empty() )
        target = name;
      else if ( target != name )
        fail( "case statement drives more than one signal" );
      expect( "=" );
      auto const v = constant( expression() );
      expect( ";" );
      if ( is_default )
      {
        st.rom.fallback = v;
        st.rom.has_default = true;
      }
      else if ( !st.rom.entries.emplace( label, v ).second )
      {
        fail( "duplicate case label" );
      }
    }
    expect( "end" );
    if ( target.empty() )
      fail( "empty case statement" );
    st.target = lookup( target );
    program.push_back( std::move( st ) );
  }

  void parse_module( std::string_view text )
  {
    toks = tokenize( text );
    expect( "module" );
    identifier();
    expect( "(" );
    expect( "input" );
    accept( "wire" );
    auto const in_w = declared_range();
    if ( identifier() != "address" )
      fail( "input port must be named 'address'" );
    address = declare( "address", in_w );
    expect( "," );
    expect( "output" );
    accept( "wire" );
    auto const out_w = declared_range();
    if ( identifier() != "data" )
      fail( "output port must be named 'data'" );
    data = declare( "data", out_w );
    expect( ")" );
    expect( ";" );

    bool assigned = false;
    while ( !accept( "endmodule" ) )
    {
      if ( peek().type == token::kind::end )
        fail( "missing endmodule" );
      if ( accept( "wire" ) )
      {
        auto const w = declared_range();
        auto const id = declare( identifier(), w );
        expect( "=" );
        program.push_back( { id, expression() } );
        expect( ";" );
      }
      else if ( accept( "reg" ) )
      {
        auto const w = declared_range();
        declare( identifier(), w );
        expect( ";" );
      }
      else if ( accept( "always" ) )
      {
        always_block();
      }
      else if ( accept( "assign" ) )
      {
        auto const id = lookup( identifier() );
        expect( "=" );
        program.push_back( { id, expression() } );
        expect( ";" );
        assigned = assigned || id == data;
      }
      else
      {
        fail( "unsupported construct '" + peek().text + "'" );
      }
    }
    if ( peek().type != token::kind::end )
      fail( "content after endmodule" );
    if ( !assigned )
      fail( "output 'data' is never assigned" );
    toks.clear();
  }

  std::uint64_t eval( expr const& e, std::vector<std::uint64_t> const& env, std::vector<bool> const& driven ) const
  {
    switch ( e.kind )
    {
    case expr::op::signal:
      if ( !driven[e.signal] )
        throw invariant_error( "verilog: '" + names[e.signal] + "' read before it is driven" );
      return env[e.signal];
    case expr::op::slice:
      if ( !driven[e.signal] )
        throw invariant_error( "verilog: '" + names[e.signal] + "' read before it is driven" );
      return ( env[e.signal] >> e.lo ) & width_mask( e.width );
    case expr::op::literal:
      return e.value;
    case expr::op::concat:
    {
      std::uint64_t v = 0;
      for ( auto const& a : e.args )
        v = ( a.width >= 64 ? 0 : v << a.width ) | ( eval( a, env, driven ) & width_mask( a.width ) );
      return v;
    }
    case expr::op::add:
      return eval( e.args[0], env, driven ) + eval( e.args[1], env, driven );
    case expr::op::shr:
    {
      auto const amount = eval( e.args[1], env, driven );
      return amount >= 64 ? 0 : eval( e.args[0], env, driven ) >> amount;
    }
    }
    return 0;
  }
};

verilog_model::verilog_model( std::string_view text )
    : impl_( std::make_unique<impl>() )
{
  impl_->parse_module( text );
}

verilog_model::~verilog_model() = default;
verilog_model::verilog_model( verilog_model&& ) noexcept = default;
verilog_model& verilog_model::operator=( verilog_model&& ) noexcept = default;

unsigned verilog_model::input_bits() const noexcept
{
  return impl_->widths[impl_->address];
}

unsigned verilog_model::output_bits() const noexcept
{
  return impl_->widths[impl_->data];
}

std::uint64_t verilog_model::evaluate( std::uint64_t address ) const
{
  auto const& m = *impl_;
  std::vector<std::uint64_t> env( m.names.size(), 0 );
  std::vector<bool> driven( m.names.size(), false );
  env[m.address] = address & width_mask( m.widths[m.address] );
  driven[m.address] = true;
  for ( auto const& st : m.program )
  {
    std::uint64_t v = 0;
    if ( st.is_case )
    {
      auto const sel = m.eval( st.value, env, driven ) & width_mask( st.value.width );
      auto it = st.rom.entries.find( sel );
      if ( it != st.rom.entries.end() )
        v = it->second;
      else if ( st.rom.has_default )
        v = st.rom.fallback;
      else
        throw invariant_error( "verilog: case on '" + m.names[st.target] + "' has no matching item" );
    }
    else
    {
      v = m.eval( st.value, env, driven );
    }
    env[st.target] = v & width_mask( m.widths[st.target] );
    driven[st.target] = true;
  }
  return env[m.data];
}

} // namespace dclut
