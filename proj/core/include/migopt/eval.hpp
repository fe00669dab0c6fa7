#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "migopt/equivalence.hpp"
#include "migopt/io.hpp"
#include "migopt/policy.hpp"
#include "migopt/rewrite.hpp"

namespace migopt
{

enum class EvalMethod : std::uint8_t
{
  Policy,       ///< argmax of a trained policy
  RandomPolicy, ///< uniform action per node
  GreedyRules   ///< size-decreasing DistRL hill climbing
};

std::string_view to_string( EvalMethod m );

/// A final graph that is not equivalent to its initial graph.
class EquivalenceFailure : public std::runtime_error
{
public:
  explicit EquivalenceFailure( const std::string& item );
  const std::string& item() const { return item_; }

private:
  std::string item_;
};

/// Published reference points, kept for side-by-side reporting only.
struct ReferencePoint
{
  std::string_view dataset;
  double baseline_msr;
  double msr;
  double relative;
};

inline constexpr std::array<ReferencePoint, 6> kReferencePoints = { {
    { "sop3", 8.65, 7.38, 0.85 },
    { "sop4", 24.59, 24.57, 1.00 },
    { "rand50", 25.54, 44.92, 1.75 },
    { "rand500", 271.24, 413.68, 1.52 },
    { "c880", 39, 17, 0.44 },
    { "c1355", 114, 106, 0.93 } } };

std::optional<ReferencePoint> reference_point( std::string_view dataset );

struct EvalConfig
{
  EvalMethod method = EvalMethod::Policy;
  std::uint32_t steps = 50;
  const PolicyParams* params = nullptr; ///< required for EvalMethod::Policy
  std::string checkpoint_id;
  std::uint64_t seed = 0; ///< random policy
  EngineOptions engine;
  std::uint32_t exact_limit = 16;
  std::optional<double> baseline_msr;
  std::string baseline_label;
};

struct EvalItem
{
  std::string name;
  std::size_t initial_size = 0;
  std::size_t final_size = 0;
  double reduction = 0.0;
  std::uint32_t steps = 0;
  double wall_ms = 0.0;
  Verdict verdict = Verdict::Equivalent;
};

struct EvalReport
{
  std::vector<EvalItem> items;
  double msr = 0.0;
  std::optional<double> rel_msr;
  std::string baseline_label;
  EvalMethod method = EvalMethod::Policy;
  std::uint32_t steps = 0;
  std::string checkpoint_id;
  std::optional<ReferencePoint> reference;
  /// Final graphs in item order.
  std::vector<MigGraph> graphs;
};

/// Runs the optimizer on every item, verifies each result against its
/// input and throws EquivalenceFailure on the first mismatch.
EvalReport evaluate( const Dataset& dataset, const EvalConfig& cfg );
/// Single graph, same semantics; `name` appears in errors.
EvalItem evaluate_graph( const MigGraph& g, const std::string& name, const EvalConfig& cfg, std::uint64_t item_seed,
                         MigGraph* final_graph = nullptr );

/// Each pass: Λ fixpoint, then every gate in identifier order tries DistRL
/// and keeps it only if the Λ-cleaned size strictly shrinks.
MigGraph greedy_rules( const MigGraph& g, std::uint32_t max_passes, const EngineOptions& engine = {} );

/// One record per item and one summary record, each a JSON line.
std::string to_json_lines( const EvalReport& r );
std::string summary_table( const EvalReport& r );

} // namespace migopt
