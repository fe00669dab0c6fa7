#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "migopt/mig_graph.hpp"

namespace migopt
{

/// An edge inside a neighborhood view: local index of the other end and
/// the edge polarity (+1 plain, -1 complemented).
struct ViewEdge
{
  std::int32_t local = -1;
  std::int8_t polarity = 0;
};

/*! \brief Induced subgraph around a center node.
 *
 * Nodes are in BFS order, so index 0 is the center and every distance
 * bound selects a prefix. Paths are followed through majority nodes only:
 * primary inputs and the constant are included when reached but not
 * expanded, so a shared input does not pull in its unrelated consumers.
 * Only edges between nodes whose distances differ by at most one are kept.
 */
struct Neighborhood
{
  std::vector<node_id> nodes;
  std::vector<std::uint8_t> distance;
  std::vector<NodeKind> kinds;
  /// Fanin edges by port; `local == -1` when absent or outside the view.
  std::vector<std::array<ViewEdge, 3>> fanins;
  /// Consumers inside the view, binned by the port through which they read the node.
  std::vector<std::array<std::vector<ViewEdge>, 3>> fanout_bins;

  std::size_t size() const { return nodes.size(); }
  /// Number of nodes with distance <= d (a prefix of `nodes`).
  std::size_t prefix( std::uint32_t d ) const;
};

Neighborhood extract_neighborhood( const MigGraph& g, node_id center, std::uint32_t depth );

} // namespace migopt
