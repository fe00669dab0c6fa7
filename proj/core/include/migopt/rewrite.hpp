#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "migopt/mig_graph.hpp"

namespace migopt
{

/// The per-node action catalog sampled by the agent.
enum class OmegaAction : std::uint8_t
{
  Identity,
  Comm01,
  Comm02,
  Comm12,
  Assoc,
  ComplAssoc,
  DistLR,
  DistRL,
  InvProp
};

inline constexpr std::size_t kActionCount = 9;
inline constexpr std::array<OmegaAction, kActionCount> kAllActions = {
    OmegaAction::Identity, OmegaAction::Comm01, OmegaAction::Comm02,
    OmegaAction::Comm12, OmegaAction::Assoc, OmegaAction::ComplAssoc,
    OmegaAction::DistLR, OmegaAction::DistRL, OmegaAction::InvProp };

std::string_view to_string( OmegaAction a );
std::optional<OmegaAction> action_from_string( std::string_view name );

/// One fanin of a rewritten root: an existing signal or one of the new nodes.
struct Operand
{
  bool is_new = false;
  std::uint8_t new_index = 0;
  Signal signal{}; ///< existing signal, or polarity carrier for a new node

  static Operand existing( Signal s ) { return Operand{ false, 0, s }; }
  static Operand fresh( std::uint8_t index, bool complemented = false )
  {
    return Operand{ true, index, Signal( 0, complemented ) };
  }
};

/// The structure a match commits: the root keeps its identifier and gets
/// `root_fanins`; `new_nodes` are created first, fanins over existing signals.
struct Replacement
{
  std::array<Operand, 3> root_fanins{};
  std::vector<std::array<Signal, 3>> new_nodes;
  /// InvProp: the root now computes the complement and every reference flips.
  bool complement_root = false;
};

/*! \brief A concrete, deterministic instance of an action at a node.
 *
 * `footprint` holds every node the rewrite reads or writes; two rewrites in
 * one step may not share any of them.
 */
struct MatchDescriptor
{
  node_id root = 0;
  OmegaAction action = OmegaAction::Identity;
  std::optional<node_id> child;        ///< matched child (Assoc, ComplAssoc, DistLR, DistRL)
  std::optional<node_id> second_child; ///< DistRL only
  std::uint8_t parent_port = 0;        ///< port of the root holding the child
  std::uint8_t second_port = 0;        ///< port of the root holding the second child
  std::uint8_t shared_port = 0;        ///< root port of the shared operand, where one exists
  std::uint8_t child_port = 0;         ///< child port of the shared (or z) operand
  std::vector<node_id> footprint;
  Replacement replacement;
};

/// Deliberately wrong rewrites, for exercising the local and global checks.
enum class FaultInjection : std::uint8_t
{
  None,
  /// DistRL emits M(x, y, M(!u, v, z)).
  BreakDistRL
};

struct EngineOptions
{
  /// Λ·R merges permutation- and polarity-equivalent triples, not just identical ones.
  bool canonical_redundancy = false;
  /// Exhaustive check of the rewritten cut before commit.
  bool verify_local = true;
  FaultInjection fault = FaultInjection::None;
};

enum class ApplyResult : std::uint8_t
{
  Applied,
  BlockedIllegal
};

enum class ActionOutcome : std::uint8_t
{
  Identity,
  Applied,
  BlockedIllegal,
  BlockedCollision
};

std::string_view to_string( ActionOutcome o );

struct StepReport
{
  std::size_t applied = 0;
  std::size_t blocked_illegal = 0;
  std::size_t blocked_collision = 0;
  std::size_t identity_count = 0;
  std::size_t lambda_m_count = 0;
  std::size_t lambda_r_count = 0;
  std::size_t nodes_created = 0; ///< by Ω rewrites
  std::size_t nodes_removed = 0; ///< dangling nodes deleted after Ω and Λ
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  std::map<node_id, ActionOutcome> outcomes;
};

using ActionMap = std::map<node_id, OmegaAction>;

/// NoMatch is std::nullopt. Requires a live majority `node`.
std::optional<MatchDescriptor> match( const MigGraph& g, node_id node, OmegaAction action,
                                      const EngineOptions& options = {} );

/// Commits `d` if the rewritten cut is equivalent to the old one; otherwise
/// leaves `g` untouched. Returns the ids of created nodes through `created`.
ApplyResult apply_omega( MigGraph& g, const MatchDescriptor& d, const EngineOptions& options = {},
                         std::vector<node_id>* created = nullptr );

/// M(x,x,z) = x and M(x,!x,z) = z, to fixpoint. Returns the number of collapses.
std::size_t lambda_majority( MigGraph& g );
/// Merges nodes with identical fanin triples into the lowest identifier, to fixpoint.
std::size_t lambda_redundancy( MigGraph& g, const EngineOptions& options = {} );

struct LambdaCounts
{
  std::size_t majority = 0;
  std::size_t redundancy = 0;
};

/// Alternates both Λ rules until neither fires.
LambdaCounts lambda_fixpoint( MigGraph& g, const EngineOptions& options = {} );

/// One environment step: every acting node, ascending, earlier rewrites lock
/// their footprint; then removes dangling nodes, runs Λ to fixpoint and
/// removes dangling nodes again.
StepReport step( MigGraph& g, const ActionMap& actions, const EngineOptions& options = {} );

} // namespace migopt
