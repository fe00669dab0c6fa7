#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "migopt/io.hpp"
#include "migopt/policy.hpp"
#include "migopt/rewrite.hpp"

namespace migopt
{

struct EpisodeConfig
{
  std::uint32_t steps = 20;
  SamplingMode mode = SamplingMode::Stochastic;
  EngineOptions engine;
  /// Keep the pre-step graph of every step; needed for training only.
  bool keep_snapshots = true;
};

struct EpisodeStep
{
  MigGraph state; ///< graph the actions were sampled on (empty without snapshots)
  ActionMap actions;
  std::map<node_id, double> log_probs;
  StepReport report;
};

struct EpisodeTrace
{
  std::vector<EpisodeStep> steps;
  std::size_t initial_size = 0;
  std::size_t final_size = 0;
  MigGraph final_graph;
};

struct EpisodeResult
{
  EpisodeTrace trace;
  double reward = 0.0;
};

/// Works on a copy of g0; reward = size(g0) - size(g_T).
EpisodeResult run_episode( const MigGraph& g0, const PolicyParams& params, const EpisodeConfig& cfg, std::mt19937_64& rng );
/// Same environment, every node draws one of the 9 actions uniformly.
EpisodeResult run_random_episode( const MigGraph& g0, const EpisodeConfig& cfg, std::mt19937_64& rng );

enum class GradientScope : std::uint8_t
{
  Applied,    ///< only actions the environment committed
  AllSampled  ///< every sampled action, blocked or identity included
};

enum class OptimizerKind : std::uint8_t
{
  Sgd,
  Adam
};

struct Baseline
{
  double value = 0.0;
  bool initialized = false;
};

struct UpdateConfig
{
  double learning_rate = 1e-3;
  double baseline_decay = 0.95;
  GradientScope scope = GradientScope::Applied;
  OptimizerKind optimizer = OptimizerKind::Sgd;
};

struct AdamState
{
  std::vector<double> m, v;
  std::uint64_t t = 0;
};

struct UpdateRecord
{
  double baseline = 0.0;
  double mean_reward = 0.0;
  double gradient_norm = 0.0;
  std::size_t terms = 0; ///< (step, node) pairs that entered the gradient
};

/// grad += sum over episodes of (R - baseline) * grad log pi, over the
/// (step, node) pairs selected by `scope`. Returns the number of pairs.
std::size_t accumulate_gradient( const PolicyParams& params, std::span<const EpisodeResult> batch, double baseline,
                                 GradientScope scope, PolicyParams& grad );

/// Moves the baseline (the first batch sets it to the mean reward), then
/// ascends the gradient computed against the moved baseline.
UpdateRecord reinforce_update( PolicyParams& params, std::span<const EpisodeResult> batch, Baseline& baseline,
                               const UpdateConfig& cfg, AdamState* adam = nullptr );

enum class DrawMode : std::uint8_t
{
  Auto,       ///< Fresh for random datasets with generator parameters, RoundRobin otherwise
  RoundRobin,
  Fresh       ///< a new random graph per episode from the dataset's generator parameters
};

struct EpisodeMetrics
{
  std::uint64_t episode = 0;
  std::string graph;
  double reward = 0.0;
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  std::size_t applied = 0;
  std::size_t blocked_illegal = 0;
  std::size_t blocked_collision = 0;
  double baseline = 0.0;
  double wall_ms = 0.0;
};

/// One JSON object per line.
std::string to_json_line( const EpisodeMetrics& m );

struct TrainConfig
{
  std::uint64_t episodes = 2000;
  std::uint32_t batch_size = 8;
  /// 0 picks 10 for SOP datasets and 20 otherwise.
  std::uint32_t steps = 0;
  UpdateConfig update;
  std::uint64_t seed = 0;
  DrawMode draw = DrawMode::Auto;
  EngineOptions engine;
  /// 0 disables periodic checkpoints.
  std::uint64_t checkpoint_every = 0;
  std::filesystem::path checkpoint_dir;
  /// Records contain wall time unless this is false (then it is written as 0).
  bool record_wall_time = true;
};

std::uint32_t default_steps( const Dataset& dataset );

struct TrainResult
{
  PolicyParams params;
  Baseline baseline;
  std::vector<EpisodeMetrics> metrics;
};

using MetricsSink = std::function<void( const EpisodeMetrics& )>;

/// Episodes are grouped into batches; each episode e uses its own stream
/// seeded from (seed, e), so results do not depend on the worker count.
TrainResult train( const Dataset& dataset, const PolicyParams& params0, const TrainConfig& cfg,
                   const MetricsSink& sink = {} );

struct OptimizeResult
{
  MigGraph graph;
  std::vector<StepReport> reports;
};

/// T argmax steps; identical environment semantics to training.
OptimizeResult greedy_optimize( const MigGraph& g, const PolicyParams& params, std::uint32_t steps,
                                const EngineOptions& engine = {} );

} // namespace migopt
