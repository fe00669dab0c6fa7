#include "migopt/simulation.hpp"

#include <random>
#include <stdexcept>

namespace migopt
{

namespace
{

constexpr std::uint64_t kProjections[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };

std::size_t word_count( std::uint32_t input_count )
{
  return input_count <= 6 ? 1 : std::size_t{ 1 } << ( input_count - 6 );
}

// Evaluates every reachable node over words; `leaf` fills PI words.
template<typename LeafFn>
std::vector<std::vector<std::uint64_t>> simulate_words( const MigGraph& g, std::size_t words, LeafFn&& leaf )
{
  const auto mask = g.reachable_mask();
  std::vector<std::vector<std::uint64_t>> values( g.capacity() );
  for ( const auto n : g.topological_order() )
  {
    if ( !mask[n] )
    {
      continue;
    }
    const auto& node = g.node( n );
    auto& out = values[n];
    switch ( node.kind )
    {
    case NodeKind::Const0:
      out.assign( words, 0 );
      break;
    case NodeKind::PrimaryInput:
      out = leaf( node.pi_index );
      break;
    case NodeKind::Majority:
    {
      out.resize( words );
      const auto& a = values[node.fanins[0].node()];
      const auto& b = values[node.fanins[1].node()];
      const auto& c = values[node.fanins[2].node()];
      const std::uint64_t ca = node.fanins[0].complemented() ? ~0ull : 0ull;
      const std::uint64_t cb = node.fanins[1].complemented() ? ~0ull : 0ull;
      const std::uint64_t cc = node.fanins[2].complemented() ? ~0ull : 0ull;
      for ( std::size_t w = 0; w < words; ++w )
      {
        const auto x = a[w] ^ ca, y = b[w] ^ cb, z = c[w] ^ cc;
        out[w] = ( x & y ) | ( x & z ) | ( y & z );
      }
      break;
    }
    }
  }
  return values;
}

std::vector<std::uint64_t> output_words( const std::vector<std::uint64_t>& v, bool complemented )
{
  auto r = v;
  if ( complemented )
  {
    for ( auto& w : r )
    {
      w = ~w;
    }
  }
  return r;
}

} // namespace

TruthTable::TruthTable( std::uint32_t input_count )
    : input_count_{ input_count }, words_( word_count( input_count ), 0 )
{
  if ( input_count > kMaxTruthTableInputs )
  {
    throw std::invalid_argument( "truth tables support at most 16 inputs" );
  }
}

TruthTable TruthTable::from_bits( std::uint32_t input_count, std::uint64_t bits )
{
  if ( input_count > 6 )
  {
    throw std::invalid_argument( "from_bits supports at most 6 inputs" );
  }
  TruthTable t( input_count );
  t.words_[0] = bits;
  t.mask_unused();
  return t;
}

TruthTable TruthTable::projection( std::uint32_t input_count, std::uint32_t index )
{
  TruthTable t( input_count );
  for ( std::size_t w = 0; w < t.words_.size(); ++w )
  {
    if ( index < 6 )
    {
      t.words_[w] = kProjections[index];
    }
    else
    {
      t.words_[w] = ( ( w >> ( index - 6 ) ) & 1u ) ? ~0ull : 0ull;
    }
  }
  t.mask_unused();
  return t;
}

void TruthTable::set_bit( std::uint64_t row, bool value )
{
  const auto m = std::uint64_t{ 1 } << ( row & 63 );
  if ( value )
  {
    words_[row >> 6] |= m;
  }
  else
  {
    words_[row >> 6] &= ~m;
  }
}

void TruthTable::mask_unused()
{
  if ( input_count_ < 6 )
  {
    words_[0] &= ( std::uint64_t{ 1 } << ( std::uint64_t{ 1 } << input_count_ ) ) - 1;
  }
}

TruthTable TruthTable::operator~() const
{
  auto t = *this;
  for ( auto& w : t.words_ )
  {
    w = ~w;
  }
  t.mask_unused();
  return t;
}

std::string TruthTable::to_hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  const auto nibbles = std::max<std::uint64_t>( 1, row_count() / 4 );
  std::string s;
  s.reserve( nibbles );
  for ( std::uint64_t i = nibbles; i-- > 0; )
  {
    const auto row = i * 4;
    s.push_back( digits[( words_[row >> 6] >> ( row & 63 ) ) & 0xF] );
  }
  return s;
}

std::vector<TruthTable> simulate_truth_tables( const MigGraph& g )
{
  if ( g.pi_count() > kMaxTruthTableInputs )
  {
    throw std::invalid_argument( "simulate_truth_tables: " + std::to_string( g.pi_count() ) + " inputs exceeds the limit of 16" );
  }
  const auto n = g.pi_count();
  const auto values = simulate_words( g, word_count( n ), [n]( std::uint32_t index ) {
    return TruthTable::projection( n, index ).words();
  } );
  std::vector<TruthTable> tables;
  tables.reserve( g.outputs().size() );
  for ( const auto o : g.outputs() )
  {
    TruthTable t( n );
    t.words() = output_words( values[o.node()], o.complemented() );
    t.mask_unused();
    tables.push_back( std::move( t ) );
  }
  return tables;
}

std::vector<std::vector<std::uint64_t>> signature_patterns( std::uint32_t pi_count, std::uint64_t seed, std::uint32_t width )
{
  if ( width < 64 )
  {
    throw std::invalid_argument( "signature width must be at least 64" );
  }
  const std::size_t words = ( width + 63 ) / 64;
  std::mt19937_64 rng( seed );
  std::vector<std::vector<std::uint64_t>> patterns( pi_count, std::vector<std::uint64_t>( words ) );
  for ( auto& p : patterns )
  {
    for ( auto& w : p )
    {
      w = rng();
    }
  }
  return patterns;
}

SignatureSet simulate_signatures( const MigGraph& g, std::uint64_t seed, std::uint32_t width )
{
  const auto patterns = signature_patterns( g.pi_count(), seed, width );
  const std::size_t words = ( width + 63 ) / 64;
  SignatureSet set;
  set.width = static_cast<std::uint32_t>( words * 64 );
  set.seed = seed;
  set.values = simulate_words( g, words, [&patterns]( std::uint32_t index ) { return patterns[index]; } );
  for ( const auto o : g.outputs() )
  {
    set.outputs.push_back( output_words( set.values[o.node()], o.complemented() ) );
  }
  return set;
}

} // namespace migopt
