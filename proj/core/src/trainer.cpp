#include "migopt/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "migopt/datagen.hpp"
#include "migopt/parallel.hpp"

namespace migopt
{

namespace
{

using ActionChooser = std::function<SampledActions( const MigGraph&, std::mt19937_64& )>;

EpisodeResult rollout( const MigGraph& g0, const EpisodeConfig& cfg, std::mt19937_64& rng, const ActionChooser& choose )
{
  if ( cfg.steps == 0 )
  {
    throw std::invalid_argument( "episode needs at least one step" );
  }
  EpisodeResult r;
  auto& trace = r.trace;
  MigGraph g = g0;
  trace.initial_size = g.size();
  trace.steps.reserve( cfg.steps );
  for ( std::uint32_t t = 0; t < cfg.steps; ++t )
  {
    EpisodeStep s;
    auto sampled = choose( g, rng );
    if ( cfg.keep_snapshots )
    {
      s.state = g;
    }
    s.report = step( g, sampled.actions, cfg.engine );
    s.actions = std::move( sampled.actions );
    s.log_probs = std::move( sampled.log_probs );
    trace.steps.push_back( std::move( s ) );
  }
  trace.final_size = g.size();
  trace.final_graph = std::move( g );
  r.reward = static_cast<double>( trace.initial_size ) - static_cast<double>( trace.final_size );
  return r;
}

} // namespace

EpisodeResult run_episode( const MigGraph& g0, const PolicyParams& params, const EpisodeConfig& cfg, std::mt19937_64& rng )
{
  return rollout( g0, cfg, rng, [&]( const MigGraph& g, std::mt19937_64& r ) {
    return sample_actions( forward_all( params, g ), r, cfg.mode );
  } );
}

EpisodeResult run_random_episode( const MigGraph& g0, const EpisodeConfig& cfg, std::mt19937_64& rng )
{
  const double log_uniform = -std::log( static_cast<double>( kActionCount ) );
  return rollout( g0, cfg, rng, [&]( const MigGraph& g, std::mt19937_64& r ) {
    SampledActions s;
    for ( const auto n : g.reachable_gates() )
    {
      s.actions[n] = kAllActions[uniform_below( r, kActionCount )];
      s.log_probs[n] = log_uniform;
    }
    return s;
  } );
}

std::size_t accumulate_gradient( const PolicyParams& params, std::span<const EpisodeResult> batch, double baseline,
                                 GradientScope scope, PolicyParams& grad )
{
  std::size_t terms = 0;
  for ( const auto& ep : batch )
  {
    const double scale = ep.reward - baseline;
    if ( scale == 0.0 )
    {
      continue;
    }
    for ( const auto& s : ep.trace.steps )
    {
      for ( const auto& [n, a] : s.actions )
      {
        if ( scope == GradientScope::Applied && s.report.outcomes.at( n ) != ActionOutcome::Applied )
        {
          continue;
        }
        backward( params, s.state, n, a, scale, grad );
        ++terms;
      }
    }
  }
  return terms;
}

UpdateRecord reinforce_update( PolicyParams& params, std::span<const EpisodeResult> batch, Baseline& baseline,
                               const UpdateConfig& cfg, AdamState* adam )
{
  UpdateRecord rec;
  if ( batch.empty() )
  {
    rec.baseline = baseline.value;
    return rec;
  }
  double mean = 0.0;
  for ( const auto& ep : batch )
    mean += ep.reward;
  mean /= static_cast<double>( batch.size() );
  rec.mean_reward = mean;
  if ( baseline.initialized )
  {
    baseline.value = cfg.baseline_decay * baseline.value + ( 1.0 - cfg.baseline_decay ) * mean;
  }
  else
  {
    baseline.value = mean;
    baseline.initialized = true;
  }
  rec.baseline = baseline.value;

  auto grad = PolicyParams::zeros( params.hp );
  rec.terms = accumulate_gradient( params, batch, baseline.value, cfg.scope, grad );
  const auto flat = grad.flatten();
  double sq = 0.0;
  for ( const auto v : flat )
    sq += v * v;
  rec.gradient_norm = std::sqrt( sq );
  if ( rec.terms == 0 )
  {
    return rec;
  }

  if ( cfg.optimizer == OptimizerKind::Sgd )
  {
    params.axpy( cfg.learning_rate, grad );
    return rec;
  }

  AdamState local;
  auto& st = adam ? *adam : local;
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if ( st.m.size() != flat.size() )
  {
    st.m.assign( flat.size(), 0.0 );
    st.v.assign( flat.size(), 0.0 );
    st.t = 0;
  }
  ++st.t;
  auto p = params.flatten();
  const double c1 = 1.0 - std::pow( b1, static_cast<double>( st.t ) );
  const double c2 = 1.0 - std::pow( b2, static_cast<double>( st.t ) );
  for ( std::size_t i = 0; i < p.size(); ++i )
  {
    st.m[i] = b1 * st.m[i] + ( 1.0 - b1 ) * flat[i];
    st.v[i] = b2 * st.v[i] + ( 1.0 - b2 ) * flat[i] * flat[i];
    p[i] += cfg.learning_rate * ( st.m[i] / c1 ) / ( std::sqrt( st.v[i] / c2 ) + eps );
  }
  params.assign( p );
  return rec;
}

std::string to_json_line( const EpisodeMetrics& m )
{
  nlohmann::json j = {
      { "episode", m.episode },
      { "graph", m.graph },
      { "reward", m.reward },
      { "size_before", m.size_before },
      { "size_after", m.size_after },
      { "applied", m.applied },
      { "blocked_illegal", m.blocked_illegal },
      { "blocked_collision", m.blocked_collision },
      { "baseline", m.baseline },
      { "wall_ms", m.wall_ms } };
  return j.dump();
}

std::uint32_t default_steps( const Dataset& dataset )
{
  return dataset.kind.rfind( "sop", 0 ) == 0 ? 10 : 20;
}

namespace
{

bool use_fresh_graphs( const Dataset& d, DrawMode mode )
{
  const bool possible = d.kind == "random" && d.parameters.count( "pi_count" ) && d.parameters.count( "po_count" ) &&
                        d.parameters.count( "target_size" );
  if ( mode == DrawMode::Fresh && !possible )
  {
    throw std::invalid_argument( "fresh draws need a random dataset with generator parameters" );
  }
  return mode == DrawMode::Fresh || ( mode == DrawMode::Auto && possible );
}

std::string train_state( std::uint64_t seed, std::uint64_t next_episode, const Baseline& b )
{
  char buf[128];
  std::snprintf( buf, sizeof buf, "seed=%llu next_episode=%llu baseline=%.17g", static_cast<unsigned long long>( seed ),
                 static_cast<unsigned long long>( next_episode ), b.value );
  return buf;
}

} // namespace

TrainResult train( const Dataset& dataset, const PolicyParams& params0, const TrainConfig& cfg, const MetricsSink& sink )
{
  TrainResult result{ params0, {}, {} };
  if ( cfg.episodes == 0 )
  {
    return result;
  }
  if ( dataset.size() == 0 )
  {
    throw std::invalid_argument( "train: dataset is empty" );
  }
  if ( !( cfg.update.learning_rate > 0.0 ) || cfg.update.baseline_decay < 0.0 || cfg.update.baseline_decay >= 1.0 )
  {
    throw std::invalid_argument( "train: need learning rate > 0 and 0 <= baseline decay < 1" );
  }
  const bool fresh = use_fresh_graphs( dataset, cfg.draw );
  RandomGraphSpec gen;
  if ( fresh )
  {
    gen.pi_count = static_cast<std::uint32_t>( dataset.parameters.at( "pi_count" ) );
    gen.po_count = static_cast<std::uint32_t>( dataset.parameters.at( "po_count" ) );
    gen.target_size = static_cast<std::uint32_t>( dataset.parameters.at( "target_size" ) );
  }

  EpisodeConfig ep_cfg;
  ep_cfg.steps = cfg.steps ? cfg.steps : default_steps( dataset );
  ep_cfg.engine = cfg.engine;
  const std::size_t batch_size = std::max<std::uint32_t>( 1, cfg.batch_size );

  auto& params = result.params;
  AdamState adam;
  for ( std::uint64_t first = 0; first < cfg.episodes; first += batch_size )
  {
    const auto count = static_cast<std::size_t>( std::min<std::uint64_t>( batch_size, cfg.episodes - first ) );
    std::vector<EpisodeResult> batch( count );
    std::vector<EpisodeMetrics> records( count );
    parallel_for( count, [&]( std::size_t i ) {
      const auto e = first + i;
      std::mt19937_64 rng( mix_seed( cfg.seed, e ) );
      const auto start = std::chrono::steady_clock::now();
      auto& rec = records[i];
      rec.episode = e;
      if ( fresh )
      {
        auto spec = gen;
        spec.seed = mix_seed( cfg.seed ^ 0x6a09e667f3bcc908ull, e );
        batch[i] = run_episode( random_mig( spec ), params, ep_cfg, rng );
        rec.graph = "fresh";
      }
      else
      {
        const auto k = static_cast<std::size_t>( e % dataset.size() );
        batch[i] = run_episode( dataset.graphs[k], params, ep_cfg, rng );
        rec.graph = k < dataset.names.size() ? dataset.names[k] : std::to_string( k );
      }
      const auto& ep = batch[i];
      rec.reward = ep.reward;
      rec.size_before = ep.trace.initial_size;
      rec.size_after = ep.trace.final_size;
      for ( const auto& s : ep.trace.steps )
      {
        rec.applied += s.report.applied;
        rec.blocked_illegal += s.report.blocked_illegal;
        rec.blocked_collision += s.report.blocked_collision;
      }
      if ( cfg.record_wall_time )
      {
        rec.wall_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
      }
    } );

    reinforce_update( params, batch, result.baseline, cfg.update, &adam );
    for ( auto& rec : records )
    {
      rec.baseline = result.baseline.value;
      if ( sink )
        sink( rec );
      result.metrics.push_back( std::move( rec ) );
    }

    const auto done = first + count;
    if ( cfg.checkpoint_every && !cfg.checkpoint_dir.empty() &&
         ( done / cfg.checkpoint_every != first / cfg.checkpoint_every || done == cfg.episodes ) )
    {
      std::filesystem::create_directories( cfg.checkpoint_dir );
      char name[48];
      std::snprintf( name, sizeof name, "episode_%08llu.ckpt", static_cast<unsigned long long>( done ) );
      save_checkpoint( cfg.checkpoint_dir / name, Checkpoint{ params, train_state( cfg.seed, done, result.baseline ) } );
    }
  }
  return result;
}

OptimizeResult greedy_optimize( const MigGraph& g, const PolicyParams& params, std::uint32_t steps, const EngineOptions& engine )
{
  OptimizeResult r{ g, {} };
  std::mt19937_64 unused( 0 );
  for ( std::uint32_t t = 0; t < steps; ++t )
  {
    const auto sampled = sample_actions( forward_all( params, r.graph ), unused, SamplingMode::Greedy );
    r.reports.push_back( step( r.graph, sampled.actions, engine ) );
  }
  return r;
}

} // namespace migopt
