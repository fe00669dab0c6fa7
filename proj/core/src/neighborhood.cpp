#include "migopt/neighborhood.hpp"

#include <algorithm>
#include <unordered_map>

namespace migopt
{

std::size_t Neighborhood::prefix( std::uint32_t d ) const
{
  return static_cast<std::size_t>(
      std::upper_bound( distance.begin(), distance.end(), d ) - distance.begin() );
}

Neighborhood extract_neighborhood( const MigGraph& g, node_id center, std::uint32_t depth )
{
  Neighborhood view;
  std::unordered_map<node_id, std::int32_t> local;
  auto visit = [&]( node_id n, std::uint8_t d ) {
    if ( local.try_emplace( n, static_cast<std::int32_t>( view.nodes.size() ) ).second )
    {
      view.nodes.push_back( n );
      view.distance.push_back( d );
    }
  };

  visit( center, 0 );
  for ( std::size_t i = 0; i < view.nodes.size(); ++i )
  {
    const auto n = view.nodes[i];
    const auto d = view.distance[i];
    if ( d >= depth || !g.is_majority( n ) )
    {
      continue;
    }
    for ( const auto f : g.node( n ).fanins )
    {
      visit( f.node(), d + 1 );
    }
    for ( const auto& fo : g.fanouts( n ) )
    {
      visit( fo.node, d + 1 );
    }
  }

  // edges spanning more than one BFS layer only arise at unexpanded
  // terminals; dropping them keeps every message inside computed layers
  auto adjacent = [&view]( std::size_t a, std::int32_t b ) {
    const int da = view.distance[a];
    const int db = view.distance[static_cast<std::size_t>( b )];
    return da - db <= 1 && db - da <= 1;
  };

  const auto count = view.nodes.size();
  view.kinds.resize( count );
  view.fanins.resize( count );
  view.fanout_bins.resize( count );
  for ( std::size_t i = 0; i < count; ++i )
  {
    const auto& node = g.node( view.nodes[i] );
    view.kinds[i] = node.kind;
    if ( node.kind == NodeKind::Majority )
    {
      for ( std::size_t p = 0; p < 3; ++p )
      {
        const auto it = local.find( node.fanins[p].node() );
        if ( it != local.end() && adjacent( i, it->second ) )
        {
          view.fanins[i][p] = ViewEdge{ it->second, static_cast<std::int8_t>( node.fanins[p].complemented() ? -1 : 1 ) };
        }
      }
    }
    for ( const auto& fo : g.fanouts( view.nodes[i] ) )
    {
      const auto it = local.find( fo.node );
      if ( it == local.end() || !adjacent( i, it->second ) )
      {
        continue;
      }
      const bool complemented = g.node( fo.node ).fanins[fo.port].complemented();
      view.fanout_bins[i][fo.port].push_back( ViewEdge{ it->second, static_cast<std::int8_t>( complemented ? -1 : 1 ) } );
    }
  }
  return view;
}

} // namespace migopt
