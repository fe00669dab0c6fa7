#include "migopt/datagen.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>

#include "migopt/parallel.hpp"
#include "migopt/rewrite.hpp"

namespace migopt
{

std::uint64_t uniform_below( std::mt19937_64& rng, std::uint64_t bound )
{
  if ( bound == 0 )
  {
    throw std::invalid_argument( "uniform_below: empty range" );
  }
  const auto limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do
  {
    v = rng();
  } while ( v >= limit );
  return v % bound;
}

std::uint64_t mix_seed( std::uint64_t seed, std::uint64_t index )
{
  auto z = seed + 0x9e3779b97f4a7c15ull * ( index + 1 );
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

namespace
{

/// Gates in the union of the output cones, with a reusable stamp buffer.
class ConeCounter
{
public:
  std::size_t count( const MigGraph& g, std::span<const Signal> roots )
  {
    if ( stamp_.size() < g.capacity() )
    {
      stamp_.resize( g.capacity(), 0 );
    }
    ++epoch_;
    std::size_t n = 0;
    stack_.clear();
    for ( const auto r : roots )
    {
      stack_.push_back( r.node() );
    }
    while ( !stack_.empty() )
    {
      const auto v = stack_.back();
      stack_.pop_back();
      if ( !g.is_majority( v ) || stamp_[v] == epoch_ )
      {
        continue;
      }
      stamp_[v] = epoch_;
      ++n;
      for ( const auto f : g.node( v ).fanins )
      {
        stack_.push_back( f.node() );
      }
    }
    return n;
  }

private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<node_id> stack_;
};

Signal random_polarity( std::mt19937_64& rng, node_id n )
{
  return Signal( n, ( rng() >> 63 ) != 0 );
}

std::optional<MigGraph> random_attempt( const RandomGraphSpec& spec, std::mt19937_64& rng )
{
  constexpr std::uint32_t kOutputTrials = 8;
  const std::size_t n = spec.target_size;
  const std::size_t max_gates = 20 * n + 100;

  MigGraph g( spec.pi_count );
  ConeCounter cones;
  std::vector<Signal> outs( spec.po_count );
  std::size_t gates = 0;
  while ( gates < max_gates )
  {
    // fanins over ids 0 .. capacity-1: the constant, the inputs and every gate so far
    const auto ids = g.capacity();
    std::array<node_id, 3> f;
    do
    {
      for ( auto& x : f )
        x = static_cast<node_id>( uniform_below( rng, ids ) );
    } while ( f[0] == f[1] || f[0] == f[2] || f[1] == f[2] );
    const auto newest = g.add_majority( random_polarity( rng, f[0] ), random_polarity( rng, f[1] ),
                                        random_polarity( rng, f[2] ) );
    ++gates;
    if ( gates < n )
    {
      continue;
    }

    const auto first_gate = spec.pi_count + 1;
    for ( std::uint32_t t = 0; t < kOutputTrials; ++t )
    {
      outs[0] = Signal( newest.node(), ( rng() >> 63 ) != 0 );
      for ( std::size_t k = 1; k < outs.size(); ++k )
      {
        outs[k] = random_polarity( rng, static_cast<node_id>( first_gate + uniform_below( rng, gates ) ) );
      }
      if ( cones.count( g, outs ) != n )
      {
        continue;
      }
      MigGraph candidate = g;
      for ( const auto o : outs )
        candidate.add_output( o );
      candidate.remove_dangling();
      lambda_fixpoint( candidate );
      candidate.remove_dangling();
      if ( candidate.size() == n )
      {
        return candidate.compact();
      }
    }
  }
  return std::nullopt;
}

} // namespace

MigGraph random_mig( const RandomGraphSpec& spec )
{
  if ( spec.target_size == 0 )
  {
    throw std::invalid_argument( "random_mig: target size must be at least 1" );
  }
  if ( spec.po_count == 0 )
  {
    throw std::invalid_argument( "random_mig: at least one output is required" );
  }
  std::mt19937_64 rng( spec.seed );
  for ( std::uint32_t attempt = 0; attempt < spec.max_attempts; ++attempt )
  {
    if ( auto g = random_attempt( spec, rng ) )
    {
      return std::move( *g );
    }
  }
  throw std::runtime_error( "random_mig: no graph of size " + std::to_string( spec.target_size ) + " after " +
                            std::to_string( spec.max_attempts ) + " attempts" );
}

Dataset random_dataset( const RandomGraphSpec& spec, std::size_t count )
{
  Dataset d;
  d.kind = "random";
  d.seed = spec.seed;
  d.parameters = { { "pi_count", spec.pi_count }, { "po_count", spec.po_count }, { "target_size", spec.target_size } };
  d.graphs.resize( count );
  parallel_for( count, [&]( std::size_t i ) {
    auto item = spec;
    item.seed = mix_seed( spec.seed, i );
    d.graphs[i] = random_mig( item );
  } );
  for ( std::size_t i = 0; i < count; ++i )
  {
    char name[32];
    std::snprintf( name, sizeof name, "rand%u_%05zu", spec.target_size, i );
    d.names.emplace_back( name );
  }
  return d;
}

MigGraph sop_decompose( const TruthTable& table )
{
  const auto k = table.input_count();
  MigGraph g( k );

  bool any = false, all = true;
  for ( std::uint64_t r = 0; r < table.row_count(); ++r )
  {
    any |= table.bit( r );
    all &= table.bit( r );
  }
  if ( !any || all )
  {
    g.add_output( g.constant( all ) );
    return g;
  }
  for ( std::uint32_t i = 0; i < k; ++i )
  {
    const auto p = TruthTable::projection( k, i );
    if ( table == p || table == ~p )
    {
      g.add_output( g.pi( i ) ^ ( table != p ) );
      return g;
    }
  }

  std::optional<Signal> sum;
  for ( std::uint64_t r = 0; r < table.row_count(); ++r )
  {
    if ( !table.bit( r ) )
    {
      continue;
    }
    auto literal = [&]( std::uint32_t i ) { return g.pi( i ) ^ !( ( r >> i ) & 1 ); };
    Signal term = literal( 0 );
    for ( std::uint32_t i = 1; i < k; ++i )
    {
      term = g.add_majority( term, literal( i ), g.constant( false ) );
    }
    sum = sum ? g.add_majority( *sum, term, g.constant( true ) ) : term;
  }
  g.add_output( *sum );
  lambda_fixpoint( g );
  g.remove_dangling();
  return g.compact();
}

Dataset enumerate_sop3()
{
  Dataset d;
  d.kind = "sop3";
  d.parameters = { { "input_count", 3 } };
  for ( std::uint32_t t = 0; t < 256; ++t )
  {
    char name[16];
    std::snprintf( name, sizeof name, "sop3_%02x", t );
    d.names.emplace_back( name );
    d.graphs.push_back( sop_decompose( TruthTable::from_bits( 3, t ) ) );
  }
  return d;
}

Dataset enumerate_sop4( std::size_t sample_count, std::uint64_t seed )
{
  constexpr std::size_t kTables = 65536;
  if ( sample_count > kTables )
  {
    throw std::invalid_argument( "enumerate_sop4: at most 65536 distinct 4-input tables exist" );
  }
  // partial Fisher-Yates over all tables
  std::vector<std::uint32_t> pool( kTables );
  for ( std::uint32_t i = 0; i < kTables; ++i )
    pool[i] = i;
  std::mt19937_64 rng( seed );
  for ( std::size_t i = 0; i < sample_count; ++i )
  {
    const auto j = i + uniform_below( rng, kTables - i );
    std::swap( pool[i], pool[j] );
  }

  Dataset d;
  d.kind = "sop4";
  d.seed = seed;
  d.parameters = { { "input_count", 4 }, { "sample_count", static_cast<std::int64_t>( sample_count ) } };
  d.graphs.resize( sample_count );
  parallel_for( sample_count, [&]( std::size_t i ) { d.graphs[i] = sop_decompose( TruthTable::from_bits( 4, pool[i] ) ); } );
  for ( std::size_t i = 0; i < sample_count; ++i )
  {
    char name[16];
    std::snprintf( name, sizeof name, "sop4_%04x", pool[i] );
    d.names.emplace_back( name );
  }
  return d;
}

} // namespace migopt
