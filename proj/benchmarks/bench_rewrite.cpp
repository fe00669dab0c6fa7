#include <benchmark/benchmark.h>

#include <random>

#include "migopt/datagen.hpp"
#include "migopt/equivalence.hpp"
#include "migopt/rewrite.hpp"
#include "migopt/simulation.hpp"

using namespace migopt;

namespace
{

ActionMap uniform_actions( const MigGraph& g, std::mt19937_64& rng )
{
  ActionMap m;
  for ( const auto n : g.gates() )
    m.emplace( n, kAllActions[uniform_below( rng, kActionCount )] );
  return m;
}

} // namespace

static void BM_StepUniform( benchmark::State& state )
{
  const auto g0 = random_mig( { .target_size = static_cast<std::uint32_t>( state.range( 0 ) ), .seed = 1 } );
  std::mt19937_64 rng( 2 );
  for ( auto _ : state )
  {
    state.PauseTiming();
    auto g = g0;
    const auto actions = uniform_actions( g, rng );
    state.ResumeTiming();
    benchmark::DoNotOptimize( step( g, actions ) );
  }
  state.SetItemsProcessed( state.iterations() * state.range( 0 ) );
}
BENCHMARK( BM_StepUniform )->RangeMultiplier( 10 )->Range( 50, 5000 )->Unit( benchmark::kMicrosecond );

static void BM_LambdaFixpointClean( benchmark::State& state )
{
  const auto g0 = random_mig( { .target_size = static_cast<std::uint32_t>( state.range( 0 ) ), .seed = 3 } );
  for ( auto _ : state )
  {
    auto g = g0;
    benchmark::DoNotOptimize( lambda_fixpoint( g ) );
  }
}
BENCHMARK( BM_LambdaFixpointClean )->RangeMultiplier( 10 )->Range( 50, 5000 )->Unit( benchmark::kMicrosecond );

static void BM_Signatures256( benchmark::State& state )
{
  const auto g = random_mig( { .target_size = static_cast<std::uint32_t>( state.range( 0 ) ), .seed = 4 } );
  for ( auto _ : state )
    benchmark::DoNotOptimize( simulate_signatures( g, 7, 256 ) );
  state.SetItemsProcessed( state.iterations() * state.range( 0 ) );
}
BENCHMARK( BM_Signatures256 )->RangeMultiplier( 10 )->Range( 50, 5000 )->Unit( benchmark::kMicrosecond );

static void BM_ExactTables( benchmark::State& state )
{
  const auto g = random_mig(
      { .pi_count = static_cast<std::uint32_t>( state.range( 0 ) ), .po_count = 2, .target_size = 200, .seed = 5 } );
  for ( auto _ : state )
    benchmark::DoNotOptimize( simulate_truth_tables( g ) );
}
BENCHMARK( BM_ExactTables )->DenseRange( 8, 16, 4 )->Unit( benchmark::kMicrosecond );
