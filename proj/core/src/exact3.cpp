#include <cstdio>
#include <vector>
#include <stdexcept>
#include <string>

#include "migopt/datagen.hpp"

namespace migopt
{

namespace
{

constexpr std::uint8_t maj8( std::uint8_t a, std::uint8_t b, std::uint8_t c )
{
  return static_cast<std::uint8_t>( ( a & b ) | ( a & c ) | ( b & c ) );
}

constexpr std::uint8_t kUnknown = 0xff;

/*! Depth-first enumeration of ordered gate lists. Gate i takes three
 * distinct literals from {0, x1, x2, x3, g_1 .. g_{i-1}} and their
 * complements; its function must be new. Adjacent gates that do not depend
 * on each other are only visited in increasing literal-triple order.
 */
class Search
{
public:
  explicit Search( std::array<std::uint8_t, 256>& best ) : best_{ best } {}

  void run( std::uint32_t gates )
  {
    budget_ = gates;
    pool_.assign( { 0x00, 0xff, 0xaa, 0x55, 0xcc, 0x33, 0xf0, 0x0f } );
    descend( 0, { 0, 0, 0 } );
  }

private:
  using Triple = std::array<std::uint32_t, 3>;

  bool known( std::uint8_t f ) const
  {
    for ( const auto p : pool_ )
      if ( p == f )
        return true;
    return false;
  }

  void descend( std::uint32_t depth, Triple previous )
  {
    if ( depth == budget_ )
    {
      return;
    }
    const auto n = static_cast<std::uint32_t>( pool_.size() );
    const auto prev_lo = n - 2; // literals of the gate added last
    for ( std::uint32_t a = 0; a < n; ++a )
      for ( std::uint32_t b = a + 1; b < n; ++b )
        for ( std::uint32_t c = b + 1; c < n; ++c )
        {
          // a literal and its complement are on adjacent even/odd slots
          if ( ( a ^ 1 ) == b || ( b ^ 1 ) == c )
            continue;
          const Triple t{ a, b, c };
          const bool uses_previous = depth > 0 && c >= prev_lo;
          if ( depth > 0 && !uses_previous && t <= previous )
            continue;
          const auto f = maj8( pool_[a], pool_[b], pool_[c] );
          if ( known( f ) )
            continue;
          const auto size = static_cast<std::uint8_t>( depth + 1 );
          if ( best_[f] > size )
            best_[f] = best_[static_cast<std::uint8_t>( ~f )] = size;
          pool_.push_back( f );
          pool_.push_back( static_cast<std::uint8_t>( ~f ) );
          descend( depth + 1, t );
          pool_.resize( n );
        }
  }

  std::array<std::uint8_t, 256>& best_;
  std::uint32_t budget_ = 0;
  std::vector<std::uint8_t> pool_;
};

std::array<std::uint8_t, 256> compute_table()
{
  std::array<std::uint8_t, 256> best;
  best.fill( kUnknown );
  for ( const std::uint8_t f : { 0x00, 0xaa, 0xcc, 0xf0 } )
  {
    best[f] = best[static_cast<std::uint8_t>( ~f )] = 0;
  }
  Search search( best );
  for ( std::uint32_t k = 1;; ++k )
  {
    bool done = true;
    for ( const auto v : best )
      done &= v != kUnknown;
    if ( done )
      break;
    if ( k > 6 )
      throw std::logic_error( "optimal_size_3: search did not cover every function" );
    search.run( k );
  }
  return best;
}

} // namespace

const std::array<std::uint8_t, 256>& optimal_size_3_table()
{
  static const auto table = compute_table();
  return table;
}

std::uint32_t optimal_size_3( std::uint8_t table )
{
  return optimal_size_3_table()[table];
}

void save_optimal_size_3_table( const std::filesystem::path& path )
{
  std::string out = "# minimum majority gates per 3-input truth table\n";
  const auto& t = optimal_size_3_table();
  for ( std::size_t f = 0; f < 256; ++f )
  {
    out += std::to_string( f ) + " " + std::to_string( t[f] ) + "\n";
  }
  write_file( path, out );
}

std::array<std::uint8_t, 256> load_optimal_size_3_table( const std::filesystem::path& path )
{
  std::array<std::uint8_t, 256> t;
  t.fill( kUnknown );
  const auto text = read_file( path );
  std::size_t line = 0, pos = 0;
  while ( pos < text.size() )
  {
    ++line;
    auto end = text.find( '\n', pos );
    if ( end == std::string::npos )
      end = text.size();
    const auto row = text.substr( pos, end - pos );
    pos = end + 1;
    if ( row.empty() || row[0] == '#' )
      continue;
    unsigned f = 0, v = 0;
    if ( std::sscanf( row.c_str(), "%u %u", &f, &v ) != 2 || f > 255 || v > 16 )
    {
      throw ParseError( line, 1, "expected `<table> <size>`" );
    }
    t[f] = static_cast<std::uint8_t>( v );
  }
  for ( std::size_t f = 0; f < 256; ++f )
  {
    if ( t[f] == kUnknown )
      throw ParseError( 0, 0, "table entry " + std::to_string( f ) + " missing" );
  }
  return t;
}

} // namespace migopt
