#include "migopt/eval.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include <nlohmann/json.hpp>

#include "migopt/datagen.hpp"
#include "migopt/parallel.hpp"
#include "migopt/trainer.hpp"

namespace migopt
{

std::string_view to_string( EvalMethod m )
{
  switch ( m )
  {
  case EvalMethod::Policy:
    return "policy";
  case EvalMethod::RandomPolicy:
    return "random_policy";
  case EvalMethod::GreedyRules:
    return "greedy_rules";
  }
  return "?";
}

EquivalenceFailure::EquivalenceFailure( const std::string& item )
    : std::runtime_error( "optimized graph is not equivalent to its input: " + item ), item_{ item }
{
}

std::optional<ReferencePoint> reference_point( std::string_view dataset )
{
  for ( const auto& p : kReferencePoints )
  {
    if ( p.dataset == dataset )
      return p;
  }
  return std::nullopt;
}

namespace
{

void clean( MigGraph& g, const EngineOptions& engine )
{
  g.remove_dangling();
  lambda_fixpoint( g, engine );
  g.remove_dangling();
}

} // namespace

MigGraph greedy_rules( const MigGraph& input, std::uint32_t max_passes, const EngineOptions& engine )
{
  MigGraph g = input;
  clean( g, engine );
  for ( std::uint32_t pass = 0; pass < max_passes; ++pass )
  {
    bool progress = false;
    for ( const auto n : g.reachable_gates() )
    {
      if ( !g.is_majority( n ) )
      {
        continue;
      }
      const auto m = match( g, n, OmegaAction::DistRL, engine );
      if ( !m )
      {
        continue;
      }
      MigGraph trial = g;
      if ( apply_omega( trial, *m, engine ) != ApplyResult::Applied )
      {
        continue;
      }
      clean( trial, engine );
      if ( trial.size() < g.size() )
      {
        g = std::move( trial );
        progress = true;
      }
    }
    if ( !progress )
    {
      break;
    }
  }
  return g;
}

EvalItem evaluate_graph( const MigGraph& g, const std::string& name, const EvalConfig& cfg, std::uint64_t item_seed,
                         MigGraph* final_graph )
{
  EvalItem item;
  item.name = name;
  item.initial_size = g.size();
  item.steps = cfg.steps;
  const auto start = std::chrono::steady_clock::now();
  MigGraph result;
  switch ( cfg.method )
  {
  case EvalMethod::Policy:
  {
    if ( !cfg.params )
    {
      throw std::invalid_argument( "evaluate: policy method without parameters" );
    }
    result = greedy_optimize( g, *cfg.params, cfg.steps, cfg.engine ).graph;
    break;
  }
  case EvalMethod::RandomPolicy:
  {
    std::mt19937_64 rng( item_seed );
    EpisodeConfig ep;
    ep.steps = std::max<std::uint32_t>( 1, cfg.steps );
    ep.engine = cfg.engine;
    ep.keep_snapshots = false;
    result = cfg.steps ? run_random_episode( g, ep, rng ).trace.final_graph : g;
    break;
  }
  case EvalMethod::GreedyRules:
    result = greedy_rules( g, cfg.steps, cfg.engine );
    break;
  }
  item.wall_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
  item.final_size = result.size();
  item.reduction = static_cast<double>( item.initial_size ) - static_cast<double>( item.final_size );
  item.verdict = verify_equivalence( g, result, cfg.exact_limit );
  if ( item.verdict == Verdict::NotEquivalent )
  {
    throw EquivalenceFailure( name );
  }
  if ( final_graph )
  {
    *final_graph = std::move( result );
  }
  return item;
}

EvalReport evaluate( const Dataset& dataset, const EvalConfig& cfg )
{
  if ( dataset.size() == 0 )
  {
    throw std::invalid_argument( "evaluate: dataset is empty" );
  }
  EvalReport r;
  r.method = cfg.method;
  r.steps = cfg.steps;
  r.checkpoint_id = cfg.checkpoint_id;
  r.baseline_label = cfg.baseline_label;
  r.reference = reference_point( dataset.kind == "random" && dataset.parameters.count( "target_size" )
                                     ? "rand" + std::to_string( dataset.parameters.at( "target_size" ) )
                                     : dataset.kind );
  r.items.resize( dataset.size() );
  r.graphs.resize( dataset.size() );
  parallel_for( dataset.size(), [&]( std::size_t i ) {
    const auto name = i < dataset.names.size() ? dataset.names[i] : std::to_string( i );
    r.items[i] = evaluate_graph( dataset.graphs[i], name, cfg, mix_seed( cfg.seed, i ), &r.graphs[i] );
  } );
  double sum = 0.0;
  for ( const auto& it : r.items )
    sum += it.reduction;
  r.msr = sum / static_cast<double>( r.items.size() );
  if ( cfg.baseline_msr && *cfg.baseline_msr != 0.0 )
  {
    r.rel_msr = r.msr / *cfg.baseline_msr;
  }
  return r;
}

std::string to_json_lines( const EvalReport& r )
{
  std::string out;
  for ( const auto& it : r.items )
  {
    nlohmann::json j = { { "item", it.name },
                         { "initial_size", it.initial_size },
                         { "final_size", it.final_size },
                         { "reduction", it.reduction },
                         { "steps", it.steps },
                         { "wall_ms", it.wall_ms },
                         { "verdict", to_string( it.verdict ) } };
    out += j.dump() + "\n";
  }
  nlohmann::json s = { { "summary", true },
                       { "method", to_string( r.method ) },
                       { "steps", r.steps },
                       { "checkpoint", r.checkpoint_id },
                       { "items", r.items.size() },
                       { "msr", r.msr } };
  if ( r.rel_msr )
  {
    s["rel_msr"] = *r.rel_msr;
    s["baseline"] = r.baseline_label;
  }
  if ( r.reference )
  {
    s["published"] = { { "dataset", r.reference->dataset },
                       { "baseline_msr", r.reference->baseline_msr },
                       { "msr", r.reference->msr },
                       { "rel_msr", r.reference->relative } };
  }
  out += s.dump() + "\n";
  return out;
}

std::string summary_table( const EvalReport& r )
{
  std::string out;
  char buf[256];
  std::snprintf( buf, sizeof buf, "%-24s %8s %8s %9s %10s\n", "item", "initial", "final", "reduction", "ms" );
  out += buf;
  for ( const auto& it : r.items )
  {
    std::snprintf( buf, sizeof buf, "%-24s %8zu %8zu %9.0f %10.2f%s\n", it.name.c_str(), it.initial_size,
                   it.final_size, it.reduction, it.wall_ms,
                   it.verdict == Verdict::SignaturesAgree ? "  (signatures)" : "" );
    out += buf;
  }
  std::snprintf( buf, sizeof buf, "method %s, T=%u, %zu items, MSR %.4f", std::string( to_string( r.method ) ).c_str(),
                 r.steps, r.items.size(), r.msr );
  out += buf;
  if ( r.rel_msr )
  {
    std::snprintf( buf, sizeof buf, ", relMSR %.1f%% vs %s", 100.0 * *r.rel_msr, r.baseline_label.c_str() );
    out += buf;
  }
  out += "\n";
  if ( r.reference )
  {
    std::snprintf( buf, sizeof buf, "published (reference only): baseline MSR %.2f, MSR %.2f, relMSR %.0f%%\n",
                   r.reference->baseline_msr, r.reference->msr, 100.0 * r.reference->relative );
    out += buf;
  }
  return out;
}

} // namespace migopt
