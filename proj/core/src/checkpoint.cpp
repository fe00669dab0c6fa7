#include <array>
#include <charconv>
#include <cstdio>

#include "migopt/io.hpp"
#include "text_cursor.hpp"

namespace migopt
{

namespace
{

constexpr std::string_view kMagic = "migopt-checkpoint";
constexpr std::uint64_t kVersion = 1;

void append_double( std::string& out, double v )
{
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars( buf.data(), buf.data() + buf.size(), v );
  out.append( buf.data(), ptr );
}

template<class Matrix>
void append_tensor( std::string& out, std::string_view name, const Matrix& m )
{
  out += "tensor ";
  out += name;
  out += " " + std::to_string( m.rows() ) + " " + std::to_string( m.cols() ) + "\n";
  for ( Eigen::Index r = 0; r < m.rows(); ++r )
  {
    for ( Eigen::Index c = 0; c < m.cols(); ++c )
    {
      if ( c )
        out += ' ';
      append_double( out, m( r, c ) );
    }
    out += '\n';
  }
}

std::string hex64( std::uint64_t v )
{
  std::array<char, 17> buf;
  std::snprintf( buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>( v ) );
  return buf.data();
}

} // namespace

std::uint64_t fnv1a64( std::string_view bytes )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( const unsigned char c : bytes )
  {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string emit_checkpoint( const Checkpoint& ckpt )
{
  const auto& p = ckpt.params;
  std::string out;
  out += std::string( kMagic ) + " " + std::to_string( kVersion ) + "\n";
  out += "hyperparams layers " + std::to_string( p.hp.layers ) + " hidden " + std::to_string( p.hp.hidden ) +
         " actions " + std::to_string( kActionCount ) + "\n";
  if ( ckpt.rng_state )
  {
    if ( ckpt.rng_state->find( '\n' ) != std::string::npos )
    {
      throw std::invalid_argument( "rng state must fit on one line" );
    }
    out += "rng " + *ckpt.rng_state + "\n";
  }
  for ( std::size_t l = 0; l < p.weights.size(); ++l )
  {
    append_tensor( out, "W" + std::to_string( l ), p.weights[l] );
    append_tensor( out, "b" + std::to_string( l ), p.biases[l] );
  }
  append_tensor( out, "Wa", p.head_weight );
  append_tensor( out, "ba", p.head_bias );
  out += "checksum fnv1a64 " + hex64( fnv1a64( out ) ) + "\n";
  return out;
}

Checkpoint parse_checkpoint( std::string_view text )
{
  const auto lines = detail::split_lines( text );
  if ( lines.empty() )
  {
    throw ParseError( 1, 1, "empty checkpoint" );
  }

  // the checksum covers every byte before the checksum line
  std::size_t last = lines.size();
  while ( last > 0 && detail::trim( lines[last - 1].text ).empty() )
    --last;
  if ( last == 0 )
  {
    throw ParseError( 1, 1, "empty checkpoint" );
  }
  const auto& trailer = lines[last - 1];
  {
    detail::TextCursor c( trailer.text, trailer.number );
    if ( !c.accept_word( "checksum" ) )
    {
      throw ParseError( trailer.number, 1, "missing checksum trailer" );
    }
    c.skip_spaces();
    c.expect_word( "fnv1a64" );
    const auto stored = c.read_token( "checksum value" );
    c.expect_end();
    const auto payload = text.substr( 0, static_cast<std::size_t>( trailer.text.data() - text.data() ) );
    if ( stored != hex64( fnv1a64( payload ) ) )
    {
      throw ParseError( trailer.number, 1, "checksum mismatch" );
    }
  }

  std::size_t row = 0;
  auto cursor = [&]() {
    if ( row + 1 >= last )
    {
      throw ParseError( trailer.number, 1, "unexpected end of checkpoint" );
    }
    const auto& l = lines[row++];
    return detail::TextCursor( l.text, l.number );
  };

  auto head = cursor();
  head.expect_word( kMagic );
  const auto version = head.read_uint( "format version" );
  head.expect_end();
  if ( version != kVersion )
  {
    throw ParseError( 1, 1, "unsupported checkpoint version " + std::to_string( version ) );
  }

  auto hpl = cursor();
  Hyperparams hp;
  hpl.expect_word( "hyperparams" );
  hpl.skip_spaces();
  hpl.expect_word( "layers" );
  hp.layers = static_cast<std::uint32_t>( hpl.read_uint( "layer count" ) );
  hpl.skip_spaces();
  hpl.expect_word( "hidden" );
  hp.hidden = static_cast<std::uint32_t>( hpl.read_uint( "hidden width" ) );
  hpl.skip_spaces();
  hpl.expect_word( "actions" );
  if ( hpl.read_uint( "action count" ) != kActionCount )
  {
    hpl.fail( "action count must be " + std::to_string( kActionCount ) );
  }
  hpl.expect_end();
  if ( hp.layers == 0 || hp.hidden == 0 || hp.layers > 64 || hp.hidden > 4096 )
  {
    throw ParseError( lines[1].number, 1, "hyperparameters out of range" );
  }

  Checkpoint ckpt;
  ckpt.params = PolicyParams::zeros( hp );
  if ( row < last && detail::TextCursor( lines[row].text, 0 ).accept_word( "rng " ) )
  {
    const auto rest = lines[row].text.substr( 4 );
    ckpt.rng_state = std::string( rest );
    ++row;
  }

  auto read_tensor = [&]( std::string_view name, auto& m ) {
    auto c = cursor();
    c.expect_word( "tensor" );
    const auto got = c.read_token( "tensor name" );
    if ( got != name )
    {
      c.fail( "expected tensor " + std::string( name ) + ", found " + std::string( got ) );
    }
    const auto rows = c.read_uint( "row count" );
    const auto cols = c.read_uint( "column count" );
    c.expect_end();
    if ( rows != static_cast<std::uint64_t>( m.rows() ) || cols != static_cast<std::uint64_t>( m.cols() ) )
    {
      c.fail( "tensor " + std::string( name ) + " has shape " + std::to_string( rows ) + "x" + std::to_string( cols ) +
              ", expected " + std::to_string( m.rows() ) + "x" + std::to_string( m.cols() ) );
    }
    for ( Eigen::Index r = 0; r < m.rows(); ++r )
    {
      auto vc = cursor();
      for ( Eigen::Index k = 0; k < m.cols(); ++k )
      {
        const auto tok = vc.read_token( "weight" );
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars( tok.data(), tok.data() + tok.size(), v );
        if ( ec != std::errc{} || ptr != tok.data() + tok.size() )
        {
          vc.fail( "malformed number `" + std::string( tok ) + "`" );
        }
        m( r, k ) = v;
      }
      vc.expect_end();
    }
  };
  auto& p = ckpt.params;
  for ( std::size_t l = 0; l < p.weights.size(); ++l )
  {
    read_tensor( "W" + std::to_string( l ), p.weights[l] );
    read_tensor( "b" + std::to_string( l ), p.biases[l] );
  }
  read_tensor( "Wa", p.head_weight );
  read_tensor( "ba", p.head_bias );
  if ( row + 1 != last )
  {
    throw ParseError( lines[row].number, 1, "unexpected content before checksum" );
  }
  return ckpt;
}

void save_checkpoint( const std::filesystem::path& path, const Checkpoint& ckpt )
{
  write_file( path, emit_checkpoint( ckpt ) );
}

Checkpoint load_checkpoint( const std::filesystem::path& path )
{
  return parse_checkpoint( read_file( path ) );
}

} // namespace migopt
