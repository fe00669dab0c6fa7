#include <benchmark/benchmark.h>

#include <random>

#include "migopt/datagen.hpp"
#include "migopt/policy.hpp"
#include "migopt/trainer.hpp"

using namespace migopt;

// per-node cost should stay flat as the graph grows
static void BM_ForwardAll( benchmark::State& state )
{
  const auto g = random_mig( { .target_size = static_cast<std::uint32_t>( state.range( 0 ) ), .seed = 1 } );
  const auto params = PolicyParams::initialize( {}, 1 );
  for ( auto _ : state )
    benchmark::DoNotOptimize( forward_all( params, g ) );
  state.SetItemsProcessed( state.iterations() * state.range( 0 ) );
}
BENCHMARK( BM_ForwardAll )->RangeMultiplier( 10 )->Range( 50, 5000 )->Unit( benchmark::kMicrosecond );

static void BM_Backward( benchmark::State& state )
{
  const auto g = random_mig( { .target_size = 200, .seed = 2 } );
  const Hyperparams hp{ .layers = static_cast<std::uint32_t>( state.range( 0 ) ), .hidden = 16 };
  const auto params = PolicyParams::initialize( hp, 2 );
  const auto center = g.gates()[100];
  auto grad = PolicyParams::zeros( hp );
  for ( auto _ : state )
  {
    const auto trace = forward_trace( params, g, center );
    backward( params, trace, OmegaAction::DistRL, 1.0, grad );
  }
}
BENCHMARK( BM_Backward )->DenseRange( 1, 4 )->Unit( benchmark::kMicrosecond );

static void BM_Rand50Episode( benchmark::State& state )
{
  const auto g = random_mig( { .target_size = 50, .seed = 3 } );
  const auto params = PolicyParams::initialize( {}, 3 );
  std::mt19937_64 rng( 4 );
  for ( auto _ : state )
    benchmark::DoNotOptimize( run_episode( g, params, {}, rng ) );
}
BENCHMARK( BM_Rand50Episode )->Unit( benchmark::kMillisecond );

static void BM_TrainSop3Batch( benchmark::State& state )
{
  const auto d = enumerate_sop3();
  TrainConfig cfg;
  cfg.episodes = 8;
  for ( auto _ : state )
    benchmark::DoNotOptimize( train( d, PolicyParams::initialize( {}, 5 ), cfg ) );
}
BENCHMARK( BM_TrainSop3Batch )->Unit( benchmark::kMillisecond );
