#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "migopt/io.hpp"
#include "text_cursor.hpp"

namespace migopt
{

ParseError::ParseError( std::size_t line, std::size_t column, const std::string& cause )
    : std::runtime_error( "line " + std::to_string( line ) + ", column " + std::to_string( column ) + ": " + cause ),
      line_{ line }, column_{ column }, cause_{ cause }
{
}

std::string read_file( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::runtime_error( "cannot open " + path.string() );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file( const std::filesystem::path& path, std::string_view contents )
{
  std::ofstream out( path, std::ios::binary | std::ios::trunc );
  if ( !out )
  {
    throw std::runtime_error( "cannot write " + path.string() );
  }
  out.write( contents.data(), static_cast<std::streamsize>( contents.size() ) );
  if ( !out )
  {
    throw std::runtime_error( "write failed for " + path.string() );
  }
}

std::string emit_mig( const MigGraph& g )
{
  // post-order DFS from the outputs, fanins in port order
  std::vector<std::uint32_t> dense( g.capacity(), 0 );
  std::vector<node_id> order;
  std::vector<std::pair<node_id, std::uint8_t>> stack;
  for ( const auto o : g.outputs() )
  {
    if ( !g.is_majority( o.node() ) || dense[o.node()] != 0 )
    {
      continue;
    }
    stack.emplace_back( o.node(), 0 );
    dense[o.node()] = ~0u;
    while ( !stack.empty() )
    {
      auto& [n, next] = stack.back();
      if ( next < 3 )
      {
        const auto c = g.node( n ).fanins[next++].node();
        if ( g.is_majority( c ) && dense[c] == 0 )
        {
          dense[c] = ~0u;
          stack.emplace_back( c, 0 );
        }
        continue;
      }
      order.push_back( n );
      dense[n] = static_cast<std::uint32_t>( order.size() );
      stack.pop_back();
    }
  }

  auto sig = [&]( Signal s ) {
    std::string t = s.complemented() ? "!" : "";
    const auto n = s.node();
    if ( n == 0 )
    {
      t += "0";
    }
    else if ( g.is_terminal( n ) )
    {
      t += "x" + std::to_string( n );
    }
    else
    {
      t += "n" + std::to_string( dense[n] );
    }
    return t;
  };

  std::string out = "mig " + std::to_string( g.pi_count() ) + " " + std::to_string( g.outputs().size() ) + " " +
                    std::to_string( order.size() ) + "\n";
  for ( const auto n : order )
  {
    const auto& f = g.node( n ).fanins;
    out += "n" + std::to_string( dense[n] ) + " = M(" + sig( f[0] ) + "," + sig( f[1] ) + "," + sig( f[2] ) + ")\n";
  }
  for ( std::size_t k = 0; k < g.outputs().size(); ++k )
  {
    out += "po" + std::to_string( k ) + " = " + sig( g.outputs()[k] ) + "\n";
  }
  return out;
}

namespace
{

enum class RefKind
{
  Constant,
  Input,
  Gate
};

struct SignalRef
{
  RefKind kind = RefKind::Constant;
  std::uint64_t index = 0;
  bool complemented = false;
  std::size_t column = 0;
};

struct GateLine
{
  std::size_t line = 0;
  std::array<SignalRef, 3> fanins;
};

SignalRef read_signal( detail::TextCursor& c )
{
  SignalRef r;
  c.skip_spaces();
  r.column = c.column();
  if ( c.accept( '!' ) )
  {
    r.complemented = true;
  }
  if ( c.accept( 'x' ) )
  {
    r.kind = RefKind::Input;
    r.index = c.read_uint( "input index" );
  }
  else if ( c.accept( 'n' ) )
  {
    r.kind = RefKind::Gate;
    r.index = c.read_uint( "node identifier" );
  }
  else if ( c.accept( '0' ) )
  {
    r.kind = RefKind::Constant;
  }
  else
  {
    c.fail( "expected a signal (x<j>, n<id> or 0)" );
  }
  return r;
}

} // namespace

MigGraph parse_mig( std::string_view text )
{
  const auto lines = detail::split_lines( text );
  std::size_t at = 0;
  auto next_content = [&]() -> const detail::Line* {
    while ( at < lines.size() )
    {
      const auto& l = lines[at++];
      const auto body = detail::trim( l.text );
      if ( !body.empty() && body.front() != '#' )
      {
        return &l;
      }
    }
    return nullptr;
  };

  const auto* header = next_content();
  if ( !header )
  {
    throw ParseError( 1, 1, "missing header `mig <pi_count> <po_count> <maj_count>`" );
  }
  detail::TextCursor hc( header->text, header->number );
  hc.skip_spaces();
  hc.expect_word( "mig" );
  const auto pi_count = hc.read_uint( "pi_count" );
  const auto po_count = hc.read_uint( "po_count" );
  const auto maj_count = hc.read_uint( "maj_count" );
  hc.expect_end();
  if ( pi_count > 0x3fffffff )
  {
    throw ParseError( header->number, 1, "pi_count too large" );
  }

  std::unordered_map<std::uint64_t, GateLine> gates;
  std::vector<std::optional<std::pair<SignalRef, std::size_t>>> outputs( po_count );
  std::vector<std::uint64_t> gate_ids;
  while ( const auto* line = next_content() )
  {
    detail::TextCursor c( line->text, line->number );
    c.skip_spaces();
    if ( c.accept_word( "po" ) )
    {
      const auto col = c.column();
      const auto k = c.read_uint( "output index" );
      if ( k >= po_count )
      {
        throw ParseError( line->number, col, "output index " + std::to_string( k ) + " out of range" );
      }
      if ( outputs[k] )
      {
        throw ParseError( line->number, col, "output po" + std::to_string( k ) + " defined twice" );
      }
      c.skip_spaces();
      c.expect( '=' );
      auto s = read_signal( c );
      c.expect_end();
      outputs[k] = std::pair{ s, line->number };
    }
    else if ( c.accept( 'n' ) )
    {
      const auto col = c.column();
      const auto id = c.read_uint( "node identifier" );
      c.skip_spaces();
      c.expect( '=' );
      c.skip_spaces();
      c.expect( 'M' );
      c.skip_spaces();
      c.expect( '(' );
      GateLine gl;
      gl.line = line->number;
      for ( std::size_t p = 0; p < 3; ++p )
      {
        gl.fanins[p] = read_signal( c );
        c.skip_spaces();
        c.expect( p < 2 ? ',' : ')' );
      }
      c.expect_end();
      if ( !gates.emplace( id, gl ).second )
      {
        throw ParseError( line->number, col, "node n" + std::to_string( id ) + " defined twice" );
      }
      gate_ids.push_back( id );
    }
    else
    {
      c.fail( "expected `n<id> = M(...)` or `po<k> = <sig>`" );
    }
  }
  if ( gates.size() != maj_count )
  {
    throw ParseError( header->number, 1, "header declares " + std::to_string( maj_count ) + " majority nodes, found " + std::to_string( gates.size() ) );
  }
  for ( std::size_t k = 0; k < po_count; ++k )
  {
    if ( !outputs[k] )
    {
      throw ParseError( header->number, 1, "output po" + std::to_string( k ) + " is not defined" );
    }
  }

  MigGraph g( static_cast<std::uint32_t>( pi_count ) );
  std::unordered_map<std::uint64_t, Signal> built;
  auto check_ref = [&]( const SignalRef& r, std::size_t line ) {
    if ( r.kind == RefKind::Input && ( r.index == 0 || r.index > pi_count ) )
    {
      throw ParseError( line, r.column, "input x" + std::to_string( r.index ) + " out of range" );
    }
    if ( r.kind == RefKind::Gate && !gates.count( r.index ) )
    {
      throw ParseError( line, r.column, "reference to undefined node n" + std::to_string( r.index ) );
    }
  };
  auto terminal = [&]( const SignalRef& r ) {
    return r.kind == RefKind::Constant ? g.constant( r.complemented )
                                       : g.pi( static_cast<std::uint32_t>( r.index - 1 ) ) ^ r.complemented;
  };
  // 1 = in progress, resolved ids live in `built`
  std::unordered_map<std::uint64_t, std::uint8_t> state;
  auto build = [&]( std::uint64_t root ) {
    std::vector<std::uint64_t> stack{ root };
    while ( !stack.empty() )
    {
      const auto id = stack.back();
      if ( built.count( id ) )
      {
        stack.pop_back();
        continue;
      }
      const auto& gl = gates.at( id );
      state[id] = 1;
      bool ready = true;
      for ( const auto& r : gl.fanins )
      {
        check_ref( r, gl.line );
        if ( r.kind == RefKind::Gate && !built.count( r.index ) )
        {
          if ( state[r.index] == 1 )
          {
            throw ParseError( gl.line, r.column, "cycle through node n" + std::to_string( r.index ) );
          }
          stack.push_back( r.index );
          ready = false;
        }
      }
      if ( !ready )
      {
        continue;
      }
      std::array<Signal, 3> f;
      for ( std::size_t p = 0; p < 3; ++p )
      {
        const auto& r = gl.fanins[p];
        f[p] = r.kind == RefKind::Gate ? built.at( r.index ) ^ r.complemented : terminal( r );
      }
      built.emplace( id, g.add_majority( f[0], f[1], f[2] ) );
      state[id] = 2;
      stack.pop_back();
    }
  };
  for ( const auto id : gate_ids )
  {
    build( id );
  }
  for ( const auto& o : outputs )
  {
    const auto& [r, line] = *o;
    check_ref( r, line );
    g.add_output( r.kind == RefKind::Gate ? built.at( r.index ) ^ r.complemented : terminal( r ) );
  }
  return g;
}

MigGraph load_mig( const std::filesystem::path& path )
{
  return parse_mig( read_file( path ) );
}

void save_mig( const std::filesystem::path& path, const MigGraph& g )
{
  write_file( path, emit_mig( g ) );
}

MigGraph load_graph( const std::filesystem::path& path )
{
  if ( path.extension() == ".aag" )
  {
    return parse_aiger_ascii( read_file( path ) );
  }
  return load_mig( path );
}

} // namespace migopt
