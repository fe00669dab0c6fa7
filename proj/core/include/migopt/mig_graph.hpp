#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace migopt
{

using node_id = std::uint32_t;

/*! \brief Reference to a node, optionally complemented.
 *
 * Inverters live on edges: a complemented signal is the negation of the
 * node it points to. Packed as `node << 1 | complemented`, which is also
 * the AIGER literal convention.
 */
class Signal
{
public:
  constexpr Signal() = default;
  constexpr explicit Signal( node_id node, bool complemented = false )
      : literal_{ ( node << 1 ) | static_cast<std::uint32_t>( complemented ) }
  {
  }

  static constexpr Signal from_literal( std::uint32_t literal )
  {
    Signal s;
    s.literal_ = literal;
    return s;
  }

  constexpr node_id node() const { return literal_ >> 1; }
  constexpr bool complemented() const { return ( literal_ & 1u ) != 0; }
  constexpr std::uint32_t literal() const { return literal_; }

  constexpr Signal operator!() const { return from_literal( literal_ ^ 1u ); }
  constexpr Signal operator^( bool complement ) const
  {
    return from_literal( literal_ ^ static_cast<std::uint32_t>( complement ) );
  }

  constexpr auto operator<=>( const Signal& ) const = default;

private:
  std::uint32_t literal_ = 0;
};

enum class NodeKind : std::uint8_t
{
  Const0,
  PrimaryInput,
  Majority
};

struct Node
{
  NodeKind kind = NodeKind::Const0;
  std::uint32_t pi_index = 0; ///< 0-based, PrimaryInput only
  std::array<Signal, 3> fanins{};
  bool alive = true;

  bool operator==( const Node& ) const = default;
};

/// A consumer edge: `node.fanins[port]` refers to the owner of the list.
struct Fanout
{
  node_id node;
  std::uint8_t port;

  bool operator==( const Fanout& ) const = default;
};

/// Raised when a fanin or output references a node that does not exist.
class GraphError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/*! \brief Majority-Inverter Graph.
 *
 * Node 0 is the constant false; nodes 1..pi_count are the primary inputs;
 * majority nodes follow. Identifiers are never reused: deleting a node
 * leaves a tombstone. Fanin order is significant. Fanout lists are kept
 * in sync with every mutation, in insertion order.
 */
class MigGraph
{
public:
  explicit MigGraph( std::uint32_t pi_count = 0 );

  std::uint32_t pi_count() const { return pi_count_; }

  /// Number of identifiers ever allocated (live, dead and terminals).
  std::size_t capacity() const { return nodes_.size(); }

  Signal constant( bool value = false ) const { return Signal( 0, value ); }
  Signal pi( std::uint32_t index ) const;

  Signal add_majority( Signal a, Signal b, Signal c );
  void add_output( Signal s );
  void set_output( std::size_t index, Signal s );
  const std::vector<Signal>& outputs() const { return outputs_; }

  const Node& node( node_id n ) const { return nodes_.at( n ); }
  bool is_live( node_id n ) const { return n < nodes_.size() && nodes_[n].alive; }
  bool is_majority( node_id n ) const
  {
    return is_live( n ) && nodes_[n].kind == NodeKind::Majority;
  }
  bool is_terminal( node_id n ) const { return n <= pi_count_; }

  std::span<const Fanout> fanouts( node_id n ) const { return fanouts_.at( n ); }
  /// Number of output entries that reference `n`.
  std::size_t output_references( node_id n ) const;

  void set_fanin( node_id n, std::size_t port, Signal s );
  /// Redirects every fanin and output that references `old_node` to `with`,
  /// composing polarities. `old_node` keeps its own fanins.
  void replace_node( node_id old_node, Signal with );
  /// Complements every edge (fanins of consumers and outputs) pointing at `n`.
  void complement_references( node_id n );

  /// Deletes majority nodes not reachable from the outputs; returns the count.
  std::size_t remove_dangling();

  /// Reachable majority nodes (the gate count that defines the reward).
  std::size_t size() const;
  std::vector<bool> reachable_mask() const;
  /// Reachable nodes of every kind, ascending.
  std::vector<node_id> reachable_nodes() const;
  /// Reachable majority nodes, ascending.
  std::vector<node_id> reachable_gates() const;
  /// Live nodes, fanins before fanouts. Throws std::logic_error on a cycle.
  std::vector<node_id> topological_order() const;
  /// Live majority nodes, ascending.
  std::vector<node_id> gates() const;
  /// Copy holding only the reachable gates, renumbered densely in topological order.
  MigGraph compact() const;

  /// Structural equality: identical node table and outputs.
  bool operator==( const MigGraph& other ) const
  {
    return pi_count_ == other.pi_count_ && nodes_ == other.nodes_ && outputs_ == other.outputs_;
  }

private:
  void check_signal( Signal s ) const;
  void unlink( node_id consumer, std::size_t port );
  void link( node_id consumer, std::size_t port );
  void kill( node_id n );

  std::uint32_t pi_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::vector<Fanout>> fanouts_;
  std::vector<Signal> outputs_;
};

/// Majority of three booleans, used by scalar evaluators.
constexpr bool majority( bool a, bool b, bool c )
{
  return ( a && b ) || ( a && c ) || ( b && c );
}

} // namespace migopt
