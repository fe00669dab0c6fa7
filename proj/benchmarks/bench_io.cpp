#include <benchmark/benchmark.h>

#include "migopt/datagen.hpp"
#include "migopt/io.hpp"

using namespace migopt;

static void BM_EmitMig( benchmark::State& state )
{
  const auto g = random_mig( { .target_size = static_cast<std::uint32_t>( state.range( 0 ) ), .seed = 1 } );
  for ( auto _ : state )
    benchmark::DoNotOptimize( emit_mig( g ) );
}
BENCHMARK( BM_EmitMig )->Range( 64, 8192 )->Unit( benchmark::kMicrosecond );

static void BM_ParseMig( benchmark::State& state )
{
  const auto text = emit_mig( random_mig( { .target_size = static_cast<std::uint32_t>( state.range( 0 ) ), .seed = 1 } ) );
  for ( auto _ : state )
    benchmark::DoNotOptimize( parse_mig( text ) );
  state.SetBytesProcessed( state.iterations() * static_cast<std::int64_t>( text.size() ) );
}
BENCHMARK( BM_ParseMig )->Range( 64, 8192 )->Unit( benchmark::kMicrosecond );

static void BM_Checkpoint( benchmark::State& state )
{
  const Checkpoint c{ PolicyParams::initialize( {}, 1 ), std::nullopt };
  for ( auto _ : state )
    benchmark::DoNotOptimize( parse_checkpoint( emit_checkpoint( c ) ) );
}
BENCHMARK( BM_Checkpoint )->Unit( benchmark::kMicrosecond );
