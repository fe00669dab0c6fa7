#include "migopt/mig_graph.hpp"

#include <algorithm>
#include <string>

namespace migopt
{

MigGraph::MigGraph( std::uint32_t pi_count ) : pi_count_{ pi_count }
{
  nodes_.reserve( pi_count + 1 );
  nodes_.push_back( Node{ NodeKind::Const0, 0, {}, true } );
  for ( std::uint32_t i = 0; i < pi_count; ++i )
  {
    nodes_.push_back( Node{ NodeKind::PrimaryInput, i, {}, true } );
  }
  fanouts_.resize( nodes_.size() );
}

Signal MigGraph::pi( std::uint32_t index ) const
{
  if ( index >= pi_count_ )
  {
    throw GraphError( "primary input index " + std::to_string( index ) + " out of range" );
  }
  return Signal( index + 1 );
}

void MigGraph::check_signal( Signal s ) const
{
  if ( !is_live( s.node() ) )
  {
    throw GraphError( "signal references dead or unknown node " + std::to_string( s.node() ) );
  }
}

Signal MigGraph::add_majority( Signal a, Signal b, Signal c )
{
  check_signal( a );
  check_signal( b );
  check_signal( c );
  const auto id = static_cast<node_id>( nodes_.size() );
  nodes_.push_back( Node{ NodeKind::Majority, 0, { a, b, c }, true } );
  fanouts_.emplace_back();
  for ( std::size_t port = 0; port < 3; ++port )
  {
    link( id, port );
  }
  return Signal( id );
}

void MigGraph::add_output( Signal s )
{
  check_signal( s );
  outputs_.push_back( s );
}

void MigGraph::set_output( std::size_t index, Signal s )
{
  check_signal( s );
  outputs_.at( index ) = s;
}

std::size_t MigGraph::output_references( node_id n ) const
{
  return static_cast<std::size_t>(
      std::count_if( outputs_.begin(), outputs_.end(), [n]( Signal s ) { return s.node() == n; } ) );
}

void MigGraph::link( node_id consumer, std::size_t port )
{
  const auto target = nodes_[consumer].fanins[port].node();
  fanouts_[target].push_back( Fanout{ consumer, static_cast<std::uint8_t>( port ) } );
}

void MigGraph::unlink( node_id consumer, std::size_t port )
{
  const auto target = nodes_[consumer].fanins[port].node();
  auto& list = fanouts_[target];
  const auto it = std::find( list.begin(), list.end(), Fanout{ consumer, static_cast<std::uint8_t>( port ) } );
  if ( it != list.end() )
  {
    list.erase( it );
  }
}

void MigGraph::set_fanin( node_id n, std::size_t port, Signal s )
{
  if ( !is_majority( n ) || port > 2 )
  {
    throw GraphError( "set_fanin on non-majority node " + std::to_string( n ) );
  }
  check_signal( s );
  unlink( n, port );
  nodes_[n].fanins[port] = s;
  link( n, port );
}

void MigGraph::replace_node( node_id old_node, Signal with )
{
  check_signal( with );
  // copy: rewiring mutates the list we iterate
  const auto consumers = fanouts_[old_node];
  for ( const auto& fo : consumers )
  {
    const auto current = nodes_[fo.node].fanins[fo.port];
    nodes_[fo.node].fanins[fo.port] = with ^ current.complemented();
    link( fo.node, fo.port );
  }
  fanouts_[old_node].clear();
  for ( auto& o : outputs_ )
  {
    if ( o.node() == old_node )
    {
      o = with ^ o.complemented();
    }
  }
}

void MigGraph::complement_references( node_id n )
{
  for ( const auto& fo : fanouts_[n] )
  {
    auto& f = nodes_[fo.node].fanins[fo.port];
    f = !f;
  }
  for ( auto& o : outputs_ )
  {
    if ( o.node() == n )
    {
      o = !o;
    }
  }
}

void MigGraph::kill( node_id n )
{
  for ( std::size_t port = 0; port < 3; ++port )
  {
    unlink( n, port );
  }
  nodes_[n].alive = false;
}

std::vector<bool> MigGraph::reachable_mask() const
{
  std::vector<bool> mask( nodes_.size(), false );
  std::vector<node_id> stack;
  for ( const auto o : outputs_ )
  {
    if ( !mask[o.node()] )
    {
      mask[o.node()] = true;
      stack.push_back( o.node() );
    }
  }
  while ( !stack.empty() )
  {
    const auto n = stack.back();
    stack.pop_back();
    if ( nodes_[n].kind != NodeKind::Majority )
    {
      continue;
    }
    for ( const auto f : nodes_[n].fanins )
    {
      if ( !mask[f.node()] )
      {
        mask[f.node()] = true;
        stack.push_back( f.node() );
      }
    }
  }
  return mask;
}

std::size_t MigGraph::remove_dangling()
{
  const auto mask = reachable_mask();
  std::size_t removed = 0;
  for ( node_id n = pi_count_ + 1; n < nodes_.size(); ++n )
  {
    if ( nodes_[n].alive && !mask[n] )
    {
      kill( n );
      ++removed;
    }
  }
  return removed;
}

std::size_t MigGraph::size() const
{
  const auto mask = reachable_mask();
  std::size_t count = 0;
  for ( node_id n = pi_count_ + 1; n < nodes_.size(); ++n )
  {
    count += mask[n] ? 1 : 0;
  }
  return count;
}

std::vector<node_id> MigGraph::reachable_nodes() const
{
  const auto mask = reachable_mask();
  std::vector<node_id> result;
  for ( node_id n = 0; n < nodes_.size(); ++n )
  {
    if ( mask[n] )
    {
      result.push_back( n );
    }
  }
  return result;
}

std::vector<node_id> MigGraph::reachable_gates() const
{
  const auto mask = reachable_mask();
  std::vector<node_id> result;
  for ( node_id n = pi_count_ + 1; n < nodes_.size(); ++n )
  {
    if ( mask[n] )
    {
      result.push_back( n );
    }
  }
  return result;
}

std::vector<node_id> MigGraph::gates() const
{
  std::vector<node_id> result;
  for ( node_id n = pi_count_ + 1; n < nodes_.size(); ++n )
  {
    if ( nodes_[n].alive )
    {
      result.push_back( n );
    }
  }
  return result;
}

std::vector<node_id> MigGraph::topological_order() const
{
  // iterative DFS; 0 = unvisited, 1 = on stack, 2 = done
  std::vector<std::uint8_t> state( nodes_.size(), 0 );
  std::vector<node_id> order;
  order.reserve( nodes_.size() );
  std::vector<std::pair<node_id, std::uint8_t>> stack;
  for ( node_id root = 0; root < nodes_.size(); ++root )
  {
    if ( !nodes_[root].alive || state[root] != 0 )
    {
      continue;
    }
    stack.emplace_back( root, 0 );
    state[root] = 1;
    while ( !stack.empty() )
    {
      auto& [n, next] = stack.back();
      if ( nodes_[n].kind == NodeKind::Majority && next < 3 )
      {
        const auto child = nodes_[n].fanins[next++].node();
        if ( !nodes_[child].alive )
        {
          throw std::logic_error( "live node " + std::to_string( n ) + " references dead node " + std::to_string( child ) );
        }
        if ( state[child] == 1 )
        {
          throw std::logic_error( "cycle through node " + std::to_string( child ) );
        }
        if ( state[child] == 0 )
        {
          state[child] = 1;
          stack.emplace_back( child, 0 );
        }
        continue;
      }
      state[n] = 2;
      order.push_back( n );
      stack.pop_back();
    }
  }
  return order;
}

MigGraph MigGraph::compact() const
{
  const auto mask = reachable_mask();
  MigGraph out( pi_count_ );
  std::vector<Signal> map( nodes_.size() );
  for ( node_id n = 0; n <= pi_count_; ++n )
  {
    map[n] = Signal( n, false );
  }
  for ( const auto n : topological_order() )
  {
    if ( !mask[n] || nodes_[n].kind != NodeKind::Majority )
    {
      continue;
    }
    const auto& f = nodes_[n].fanins;
    auto m = [&]( Signal s ) { return map[s.node()] ^ s.complemented(); };
    map[n] = out.add_majority( m( f[0] ), m( f[1] ), m( f[2] ) );
  }
  for ( const auto o : outputs_ )
  {
    out.add_output( map[o.node()] ^ o.complemented() );
  }
  return out;
}

} // namespace migopt
