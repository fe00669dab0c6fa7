#include "migopt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "migopt/datagen.hpp"
#include "migopt/equivalence.hpp"
#include "migopt/eval.hpp"
#include "migopt/io.hpp"
#include "migopt/trainer.hpp"

namespace migopt::cli
{

namespace
{

/// Built-in dataset names, otherwise a directory written by `gen` or `sop`.
Dataset open_dataset( const std::string& ref, std::uint64_t seed )
{
  if ( ref == "sop3" )
    return enumerate_sop3();
  if ( ref == "sop4" )
    return enumerate_sop4( 10000, seed );
  return load_dataset( ref );
}

std::string verdict_text( Verdict v )
{
  switch ( v )
  {
  case Verdict::Equivalent:
    return "equivalent (exhaustive)";
  case Verdict::NotEquivalent:
    return "not equivalent";
  case Verdict::SignaturesAgree:
    return "signatures agree (not proven: too many inputs for exhaustive check)";
  }
  return "?";
}

struct Streams
{
  std::ostream& out;
  std::ostream& err;
};

int cmd_gen( Streams io, std::uint32_t n, std::uint32_t pi, std::uint32_t po, std::size_t count, std::uint64_t seed,
             const std::string& out_dir )
{
  RandomGraphSpec spec;
  spec.target_size = n;
  spec.pi_count = pi;
  spec.po_count = po;
  spec.seed = seed;
  save_dataset( out_dir, random_dataset( spec, count ) );
  io.out << "wrote " << count << " graphs of size " << n << " to " << out_dir << "\n";
  return kExitOk;
}

int cmd_sop( Streams io, std::uint32_t inputs, std::size_t samples, std::uint64_t seed, const std::string& out_dir )
{
  if ( inputs != 3 && inputs != 4 )
  {
    io.err << "sop: --inputs must be 3 or 4\n";
    return kExitFailure;
  }
  const auto d = inputs == 3 ? enumerate_sop3() : enumerate_sop4( samples, seed );
  save_dataset( out_dir, d );
  io.out << "wrote " << d.size() << " SOP graphs to " << out_dir << "\n";
  return kExitOk;
}

struct TrainFlags
{
  std::string dataset;
  std::uint32_t layers = 3;
  std::uint32_t hidden = 16;
  std::uint32_t steps = 0;
  std::uint64_t episodes = 2000;
  double lr = 1e-3;
  double baseline_decay = 0.95;
  std::uint32_t batch = 8;
  std::uint64_t seed = 0;
  std::string ckpt_out;
  std::string metrics;
  std::uint64_t ckpt_every = 0;
  std::string ckpt_dir;
  std::string optimizer = "sgd";
  std::string scope = "applied";
  bool no_wall_time = false;
};

int cmd_train( Streams io, const TrainFlags& f, const Context& ctx )
{
  const auto dataset = open_dataset( f.dataset, f.seed );
  const Hyperparams hp{ f.layers, f.hidden };
  const auto params0 = PolicyParams::initialize( hp, f.seed );

  TrainConfig cfg;
  cfg.episodes = f.episodes;
  cfg.batch_size = f.batch;
  cfg.steps = f.steps;
  cfg.seed = f.seed;
  cfg.update.learning_rate = f.lr;
  cfg.update.baseline_decay = f.baseline_decay;
  cfg.update.optimizer = f.optimizer == "adam" ? OptimizerKind::Adam : OptimizerKind::Sgd;
  cfg.update.scope = f.scope == "all" ? GradientScope::AllSampled : GradientScope::Applied;
  cfg.engine = ctx.engine;
  cfg.checkpoint_every = f.ckpt_every;
  cfg.record_wall_time = !f.no_wall_time;
  const std::filesystem::path out = f.ckpt_out;
  if ( f.ckpt_every )
  {
    cfg.checkpoint_dir = f.ckpt_dir.empty() ? out.parent_path() / ( out.stem().string() + "_checkpoints" )
                                            : std::filesystem::path( f.ckpt_dir );
  }

  const auto metrics_path = f.metrics.empty() ? std::filesystem::path( f.ckpt_out + ".metrics.jsonl" )
                                              : std::filesystem::path( f.metrics );
  std::ofstream log( metrics_path, std::ios::trunc );
  if ( !log )
  {
    io.err << "train: cannot write " << metrics_path.string() << "\n";
    return kExitFailure;
  }
  double window = 0.0;
  std::size_t seen = 0;
  const auto result = train( dataset, params0, cfg, [&]( const EpisodeMetrics& m ) {
    log << to_json_line( m ) << "\n";
    window += m.reward;
    if ( ++seen % 500 == 0 )
    {
      io.out << "episode " << seen << ": mean reward (last 500) " << window / 500.0 << "\n";
      window = 0.0;
    }
  } );
  if ( !log.flush() )
  {
    io.err << "train: failed writing " << metrics_path.string() << "\n";
    return kExitFailure;
  }
  std::string state = "seed=" + std::to_string( f.seed ) + " next_episode=" + std::to_string( f.episodes );
  save_checkpoint( out, Checkpoint{ result.params, state } );
  io.out << "trained " << f.episodes << " episodes; checkpoint " << out.string() << ", metrics "
         << metrics_path.string() << "\n";
  return kExitOk;
}

int cmd_optimize( Streams io, const std::string& in, const std::string& ckpt_path, std::uint32_t steps,
                  const std::string& mode, std::uint64_t seed, const std::string& out, const Context& ctx )
{
  const auto g = load_graph( in );
  const auto ckpt = load_checkpoint( ckpt_path );
  MigGraph result;
  if ( mode == "greedy" )
  {
    result = greedy_optimize( g, ckpt.params, steps, ctx.engine ).graph;
  }
  else
  {
    if ( steps == 0 )
    {
      result = g;
    }
    else
    {
      EpisodeConfig ep;
      ep.steps = steps;
      ep.engine = ctx.engine;
      ep.keep_snapshots = false;
      std::mt19937_64 rng( seed );
      result = run_episode( g, ckpt.params, ep, rng ).trace.final_graph;
    }
  }
  const auto verdict = verify_equivalence( g, result );
  io.out << "size_before " << g.size() << "\nsize_after " << result.size() << "\nequivalence "
         << verdict_text( verdict ) << "\n";
  if ( verdict == Verdict::NotEquivalent )
  {
    io.err << "optimize: result is not equivalent to the input; nothing written\n";
    return kExitFailure;
  }
  if ( !out.empty() )
  {
    save_mig( out, result.compact() );
  }
  return kExitOk;
}

int cmd_eval( Streams io, const std::string& dataset_ref, const std::string& method, const std::string& ckpt_path,
              std::uint32_t steps, std::uint64_t seed, std::optional<double> baseline_msr,
              const std::string& baseline_label, const std::string& jsonl, const Context& ctx )
{
  const auto dataset = open_dataset( dataset_ref, seed );
  EvalConfig cfg;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.engine = ctx.engine;
  cfg.baseline_msr = baseline_msr;
  cfg.baseline_label = baseline_label.empty() ? "supplied baseline" : baseline_label;
  std::optional<Checkpoint> ckpt;
  if ( method == "policy" )
  {
    if ( ckpt_path.empty() )
    {
      io.err << "eval: --ckpt is required for --method policy\n";
      return kExitFailure;
    }
    ckpt = load_checkpoint( ckpt_path );
    cfg.method = EvalMethod::Policy;
    cfg.params = &ckpt->params;
    cfg.checkpoint_id = ckpt_path;
  }
  else if ( method == "random" )
  {
    cfg.method = EvalMethod::RandomPolicy;
  }
  else
  {
    cfg.method = EvalMethod::GreedyRules;
  }
  const auto report = evaluate( dataset, cfg );
  if ( !jsonl.empty() )
  {
    write_file( jsonl, to_json_lines( report ) );
  }
  io.out << summary_table( report );
  return kExitOk;
}

int cmd_verify( Streams io, const std::string& a_path, const std::string& b_path )
{
  const auto a = load_graph( a_path );
  const auto b = load_graph( b_path );
  if ( a.pi_count() != b.pi_count() || a.outputs().size() != b.outputs().size() )
  {
    io.out << "not equivalent: interfaces differ (" << a.pi_count() << "/" << a.outputs().size() << " vs "
           << b.pi_count() << "/" << b.outputs().size() << " inputs/outputs)\n";
    return kExitFailure;
  }
  const auto v = verify_equivalence( a, b );
  io.out << verdict_text( v ) << "\n";
  return v == Verdict::Equivalent ? kExitOk : v == Verdict::NotEquivalent ? kExitFailure : kExitUnproven;
}

int cmd_convert( Streams io, const std::string& in, const std::string& out )
{
  const auto g = parse_aiger_ascii( read_file( in ) );
  save_mig( out, g );
  io.out << "converted " << in << ": " << g.pi_count() << " inputs, " << g.outputs().size() << " outputs, size "
         << g.size() << "\n";
  return kExitOk;
}

} // namespace

int run( const std::vector<std::string>& args, const Context& ctx )
{
  Streams io{ ctx.out ? *ctx.out : std::cout, ctx.err ? *ctx.err : std::cerr };

  CLI::App app{ "Majority-Inverter Graph optimization with a learned rewriting policy", "migopt" };
  app.require_subcommand( 1 );

  auto* gen = app.add_subcommand( "gen", "Generate a random MIG dataset" );
  std::uint32_t n = 50, pi = 100, po = 2;
  std::size_t count = 1000;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option( "--n", n, "Reachable majority nodes per graph" )->capture_default_str()->check( CLI::PositiveNumber );
  gen->add_option( "--pi", pi, "Primary inputs" )->capture_default_str();
  gen->add_option( "--po", po, "Primary outputs" )->capture_default_str()->check( CLI::PositiveNumber );
  gen->add_option( "--count", count, "Number of graphs" )->capture_default_str();
  gen->add_option( "--seed", gen_seed, "Generator seed" )->required();
  gen->add_option( "--out-dir", gen_out, "Output directory" )->required();

  auto* sop = app.add_subcommand( "sop", "Write a sum-of-products dataset" );
  std::uint32_t sop_inputs = 3;
  std::size_t sop_samples = 10000;
  std::uint64_t sop_seed = 0;
  std::string sop_out;
  sop->add_option( "--inputs", sop_inputs, "3 (all 256 functions) or 4 (sampled)" )->capture_default_str();
  sop->add_option( "--samples", sop_samples, "Distinct 4-input tables to draw" )->capture_default_str();
  sop->add_option( "--seed", sop_seed, "Sampling seed (4 inputs)" )->capture_default_str();
  sop->add_option( "--out-dir", sop_out, "Output directory" )->required();

  auto* trn = app.add_subcommand( "train", "Train a policy with REINFORCE" );
  TrainFlags tf;
  trn->add_option( "--dataset", tf.dataset, "Dataset directory, or sop3 / sop4" )->required();
  trn->add_option( "--layers", tf.layers, "GCN layers (= neighborhood depth)" )->capture_default_str()->check( CLI::PositiveNumber );
  trn->add_option( "--hidden", tf.hidden, "Hidden width" )->capture_default_str()->check( CLI::PositiveNumber );
  trn->add_option( "--steps", tf.steps, "Steps per episode (0: 10 for SOP data, 20 otherwise)" )->capture_default_str();
  trn->add_option( "--episodes", tf.episodes, "Episodes" )->capture_default_str();
  trn->add_option( "--lr", tf.lr, "Learning rate" )->capture_default_str();
  trn->add_option( "--baseline-decay", tf.baseline_decay, "Moving-average baseline decay" )->capture_default_str();
  trn->add_option( "--batch", tf.batch, "Episodes per update" )->capture_default_str();
  trn->add_option( "--seed", tf.seed, "Seed for initialization and rollouts" )->required();
  trn->add_option( "--ckpt-out", tf.ckpt_out, "Final checkpoint path" )->required();
  trn->add_option( "--metrics", tf.metrics, "Metrics log (default: <ckpt-out>.metrics.jsonl)" );
  trn->add_option( "--ckpt-every", tf.ckpt_every, "Periodic checkpoint cadence in episodes (0: off)" )->capture_default_str();
  trn->add_option( "--ckpt-dir", tf.ckpt_dir, "Directory for periodic checkpoints" );
  trn->add_option( "--optimizer", tf.optimizer, "sgd or adam" )->capture_default_str()->check( CLI::IsMember( { "sgd", "adam" } ) );
  trn->add_option( "--scope", tf.scope, "Actions in the loss: applied or all" )->capture_default_str()->check( CLI::IsMember( { "applied", "all" } ) );
  trn->add_flag( "--no-wall-time", tf.no_wall_time, "Write 0 for wall time in the metrics log" );

  auto* opt = app.add_subcommand( "optimize", "Optimize one graph with a trained policy" );
  std::string opt_in, opt_ckpt, opt_out, opt_mode = "greedy";
  std::uint32_t opt_steps = 50;
  std::uint64_t opt_seed = 0;
  opt->add_option( "--in", opt_in, "Input graph (.mig or .aag)" )->required();
  opt->add_option( "--ckpt", opt_ckpt, "Policy checkpoint" )->required();
  opt->add_option( "--steps", opt_steps, "Optimization steps" )->capture_default_str();
  opt->add_option( "--mode", opt_mode, "greedy (argmax) or sample" )->capture_default_str()->check( CLI::IsMember( { "greedy", "sample" } ) );
  opt->add_option( "--seed", opt_seed, "Sampling seed" )->capture_default_str();
  opt->add_option( "--out", opt_out, "Optimized graph (.mig)" );

  auto* ev = app.add_subcommand( "eval", "Mean size reduction over a dataset" );
  std::string ev_dataset, ev_method = "policy", ev_ckpt, ev_jsonl, ev_label;
  std::uint32_t ev_steps = 50;
  std::uint64_t ev_seed = 0;
  std::optional<double> ev_baseline;
  ev->add_option( "--dataset", ev_dataset, "Dataset directory, or sop3 / sop4" )->required();
  ev->add_option( "--method", ev_method, "policy, random or greedy" )->capture_default_str()->check( CLI::IsMember( { "policy", "random", "greedy" } ) );
  ev->add_option( "--ckpt", ev_ckpt, "Checkpoint (policy method)" );
  ev->add_option( "--steps", ev_steps, "Steps per item (greedy: passes)" )->capture_default_str();
  ev->add_option( "--seed", ev_seed, "Random-policy seed" )->capture_default_str();
  ev->add_option( "--baseline-msr", ev_baseline, "Baseline MSR for relMSR" );
  ev->add_option( "--baseline-label", ev_label, "Name of the baseline" );
  ev->add_option( "--jsonl", ev_jsonl, "Write per-item records here" );

  auto* ve = app.add_subcommand( "verify-equiv", "Check two graphs for functional equivalence" );
  std::string ve_a, ve_b;
  ve->add_option( "--a", ve_a, "First graph" )->required();
  ve->add_option( "--b", ve_b, "Second graph" )->required();

  auto* cv = app.add_subcommand( "convert", "Translate ASCII AIGER into MIG text" );
  std::string cv_in, cv_out;
  cv->add_option( "--in", cv_in, "Input .aag" )->required();
  cv->add_option( "--out", cv_out, "Output .mig" )->required();

  try
  {
    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    app.parse( reversed );
  }
  catch ( const CLI::ParseError& e )
  {
    return app.exit( e, io.out, io.err ) == 0 ? kExitOk : kExitFailure;
  }

  try
  {
    if ( *gen )
      return cmd_gen( io, n, pi, po, count, gen_seed, gen_out );
    if ( *sop )
      return cmd_sop( io, sop_inputs, sop_samples, sop_seed, sop_out );
    if ( *trn )
      return cmd_train( io, tf, ctx );
    if ( *opt )
      return cmd_optimize( io, opt_in, opt_ckpt, opt_steps, opt_mode, opt_seed, opt_out, ctx );
    if ( *ev )
      return cmd_eval( io, ev_dataset, ev_method, ev_ckpt, ev_steps, ev_seed, ev_baseline, ev_label, ev_jsonl, ctx );
    if ( *ve )
      return cmd_verify( io, ve_a, ve_b );
    if ( *cv )
      return cmd_convert( io, cv_in, cv_out );
  }
  catch ( const ParseError& e )
  {
    io.err << "parse error: " << e.what() << "\n";
    return kExitFailure;
  }
  catch ( const EquivalenceFailure& e )
  {
    io.err << "soundness failure: " << e.what() << "\n";
    return kExitFailure;
  }
  catch ( const std::exception& e )
  {
    io.err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

} // namespace migopt::cli
