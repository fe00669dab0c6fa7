#include "migopt/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace migopt
{

std::string_view to_string( OmegaAction a )
{
  switch ( a )
  {
  case OmegaAction::Identity: return "identity";
  case OmegaAction::Comm01: return "comm01";
  case OmegaAction::Comm02: return "comm02";
  case OmegaAction::Comm12: return "comm12";
  case OmegaAction::Assoc: return "assoc";
  case OmegaAction::ComplAssoc: return "compl_assoc";
  case OmegaAction::DistLR: return "dist_lr";
  case OmegaAction::DistRL: return "dist_rl";
  case OmegaAction::InvProp: return "inv_prop";
  }
  return "?";
}

std::optional<OmegaAction> action_from_string( std::string_view name )
{
  for ( const auto a : kAllActions )
  {
    if ( to_string( a ) == name )
    {
      return a;
    }
  }
  return std::nullopt;
}

std::string_view to_string( ActionOutcome o )
{
  switch ( o )
  {
  case ActionOutcome::Identity: return "identity";
  case ActionOutcome::Applied: return "applied";
  case ActionOutcome::BlockedIllegal: return "blocked_illegal";
  case ActionOutcome::BlockedCollision: return "blocked_collision";
  }
  return "?";
}

namespace
{

using Triple = std::array<Signal, 3>;

// fanins of `s.node()` as seen through the polarity of `s`
Triple effective_fanins( const MigGraph& g, Signal s )
{
  auto f = g.node( s.node() ).fanins;
  for ( auto& x : f )
  {
    x = x ^ s.complemented();
  }
  return f;
}

MatchDescriptor with_root( const MigGraph& g, node_id root, OmegaAction action )
{
  MatchDescriptor d;
  d.root = root;
  d.action = action;
  d.footprint = { root };
  for ( std::size_t p = 0; p < 3; ++p )
  {
    d.replacement.root_fanins[p] = Operand::existing( g.node( root ).fanins[p] );
  }
  return d;
}

std::optional<MatchDescriptor> match_comm( const MigGraph& g, node_id root, OmegaAction action, std::size_t a, std::size_t b )
{
  auto d = with_root( g, root, action );
  std::swap( d.replacement.root_fanins[a], d.replacement.root_fanins[b] );
  return d;
}

std::optional<MatchDescriptor> match_inv_prop( const MigGraph& g, node_id root )
{
  auto d = with_root( g, root, OmegaAction::InvProp );
  for ( auto& op : d.replacement.root_fanins )
  {
    op.signal = !op.signal;
  }
  d.replacement.complement_root = true;
  for ( const auto& fo : g.fanouts( root ) )
  {
    if ( std::find( d.footprint.begin(), d.footprint.end(), fo.node ) == d.footprint.end() )
    {
      d.footprint.push_back( fo.node );
    }
  }
  return d;
}

// M(x,u,M(y,u,z)) = M(z,u,M(y,u,x))
std::optional<MatchDescriptor> match_assoc( const MigGraph& g, node_id root )
{
  const auto& rf = g.node( root ).fanins;
  for ( std::uint8_t pc = 0; pc < 3; ++pc )
  {
    if ( !g.is_majority( rf[pc].node() ) )
    {
      continue;
    }
    const auto eff = effective_fanins( g, rf[pc] );
    for ( std::uint8_t pu = 0; pu < 3; ++pu )
    {
      if ( pu == pc )
      {
        continue;
      }
      const auto px = static_cast<std::uint8_t>( 3 - pc - pu );
      for ( std::uint8_t cu = 0; cu < 3; ++cu )
      {
        if ( eff[cu] != rf[pu] )
        {
          continue;
        }
        for ( std::uint8_t pz = 0; pz < 3; ++pz )
        {
          if ( pz == cu || eff[pz] == rf[px] )
          {
            continue;
          }
          auto d = with_root( g, root, OmegaAction::Assoc );
          d.child = rf[pc].node();
          d.parent_port = pc;
          d.shared_port = pu;
          d.child_port = cu;
          d.footprint.push_back( rf[pc].node() );
          auto fresh = eff;
          fresh[pz] = rf[px];
          d.replacement.new_nodes.push_back( fresh );
          d.replacement.root_fanins[px] = Operand::existing( eff[pz] );
          d.replacement.root_fanins[pc] = Operand::fresh( 0 );
          return d;
        }
      }
    }
  }
  return std::nullopt;
}

// M(x,u,M(y,!u,z)) = M(x,u,M(y,x,z))
std::optional<MatchDescriptor> match_compl_assoc( const MigGraph& g, node_id root )
{
  const auto& rf = g.node( root ).fanins;
  for ( std::uint8_t pc = 0; pc < 3; ++pc )
  {
    if ( !g.is_majority( rf[pc].node() ) )
    {
      continue;
    }
    const auto eff = effective_fanins( g, rf[pc] );
    for ( std::uint8_t pu = 0; pu < 3; ++pu )
    {
      if ( pu == pc )
      {
        continue;
      }
      const auto px = static_cast<std::uint8_t>( 3 - pc - pu );
      for ( std::uint8_t cu = 0; cu < 3; ++cu )
      {
        if ( eff[cu] != !rf[pu] || rf[px] == eff[cu] )
        {
          continue;
        }
        auto d = with_root( g, root, OmegaAction::ComplAssoc );
        d.child = rf[pc].node();
        d.parent_port = pc;
        d.shared_port = pu;
        d.child_port = cu;
        d.footprint.push_back( rf[pc].node() );
        auto fresh = eff;
        fresh[cu] = rf[px];
        d.replacement.new_nodes.push_back( fresh );
        d.replacement.root_fanins[pc] = Operand::fresh( 0 );
        return d;
      }
    }
  }
  return std::nullopt;
}

// M(x,y,M(u,v,z)) = M(M(x,y,u),M(x,y,v),z)
std::optional<MatchDescriptor> match_dist_lr( const MigGraph& g, node_id root )
{
  const auto& rf = g.node( root ).fanins;
  for ( std::uint8_t pc = 0; pc < 3; ++pc )
  {
    if ( !g.is_majority( rf[pc].node() ) )
    {
      continue;
    }
    const auto eff = effective_fanins( g, rf[pc] );
    const std::uint8_t px = pc == 0 ? 1 : 0;
    const std::uint8_t py = pc == 2 ? 1 : 2;
    for ( std::uint8_t cz = 0; cz < 3; ++cz )
    {
      const std::uint8_t cu = cz == 0 ? 1 : 0;
      const std::uint8_t cv = cz == 2 ? 1 : 2;
      auto d = with_root( g, root, OmegaAction::DistLR );
      d.child = rf[pc].node();
      d.parent_port = pc;
      d.child_port = cz;
      d.footprint.push_back( rf[pc].node() );
      d.replacement.new_nodes.push_back( { rf[px], rf[py], eff[cu] } );
      d.replacement.new_nodes.push_back( { rf[px], rf[py], eff[cv] } );
      d.replacement.root_fanins[px] = Operand::fresh( 0 );
      d.replacement.root_fanins[py] = Operand::fresh( 1 );
      d.replacement.root_fanins[pc] = Operand::existing( eff[cz] );
      return d;
    }
  }
  return std::nullopt;
}

// M(M(x,y,u),M(x,y,v),z) = M(x,y,M(u,v,z))
std::optional<MatchDescriptor> match_dist_rl( const MigGraph& g, node_id root, const EngineOptions& options )
{
  const auto& rf = g.node( root ).fanins;
  for ( std::uint8_t p1 = 0; p1 < 3; ++p1 )
  {
    if ( !g.is_majority( rf[p1].node() ) )
    {
      continue;
    }
    for ( std::uint8_t p2 = p1 + 1; p2 < 3; ++p2 )
    {
      if ( !g.is_majority( rf[p2].node() ) || rf[p2].node() == rf[p1].node() )
      {
        continue;
      }
      const auto pz = static_cast<std::uint8_t>( 3 - p1 - p2 );
      const auto e1 = effective_fanins( g, rf[p1] );
      const auto e2 = effective_fanins( g, rf[p2] );
      for ( std::uint8_t i1 = 0; i1 < 3; ++i1 )
      {
        for ( std::uint8_t j1 = i1 + 1; j1 < 3; ++j1 )
        {
          for ( std::uint8_t i2 = 0; i2 < 3; ++i2 )
          {
            if ( e2[i2] != e1[i1] )
            {
              continue;
            }
            for ( std::uint8_t j2 = 0; j2 < 3; ++j2 )
            {
              if ( j2 == i2 || e2[j2] != e1[j1] )
              {
                continue;
              }
              const auto u = e1[3 - i1 - j1];
              const auto v = e2[3 - i2 - j2];
              auto d = with_root( g, root, OmegaAction::DistRL );
              d.child = rf[p1].node();
              d.second_child = rf[p2].node();
              d.parent_port = p1;
              d.second_port = p2;
              d.child_port = i1;
              d.footprint.push_back( rf[p1].node() );
              d.footprint.push_back( rf[p2].node() );
              const auto u_emit = options.fault == FaultInjection::BreakDistRL ? !u : u;
              d.replacement.new_nodes.push_back( { u_emit, v, rf[pz] } );
              d.replacement.root_fanins[p1] = Operand::existing( e1[i1] );
              d.replacement.root_fanins[p2] = Operand::existing( e1[j1] );
              d.replacement.root_fanins[pz] = Operand::fresh( 0 );
              return d;
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

// Exhaustive comparison of the old and new cut over its distinct leaf nodes.
class CutChecker
{
public:
  CutChecker( const MigGraph& g, const MatchDescriptor& d ) : g_{ g }, d_{ d } {}

  bool equivalent()
  {
    const auto& rf = g_.node( d_.root ).fanins;
    for ( std::size_t p = 0; p < 3; ++p )
    {
      if ( expanded( p ) )
      {
        for ( const auto f : g_.node( rf[p].node() ).fanins )
        {
          add_leaf( f );
        }
      }
      else
      {
        add_leaf( rf[p] );
      }
    }
    for ( const auto& n : d_.replacement.new_nodes )
    {
      for ( const auto f : n )
      {
        add_leaf( f );
      }
    }
    for ( const auto& op : d_.replacement.root_fanins )
    {
      if ( !op.is_new )
      {
        add_leaf( op.signal );
      }
    }
    if ( leaves_.size() > 8 )
    {
      return false;
    }
    const std::uint32_t rows = 1u << leaves_.size();
    for ( std::uint32_t r = 0; r < rows; ++r )
    {
      if ( old_value( r ) != ( new_value( r ) ^ d_.replacement.complement_root ) )
      {
        return false;
      }
    }
    return true;
  }

private:
  bool expanded( std::size_t port ) const
  {
    const auto n = g_.node( d_.root ).fanins[port].node();
    return ( d_.child && *d_.child == n && d_.parent_port == port ) ||
           ( d_.second_child && *d_.second_child == n && d_.second_port == port );
  }

  void add_leaf( Signal s )
  {
    if ( s.node() != 0 && std::find( leaves_.begin(), leaves_.end(), s.node() ) == leaves_.end() )
    {
      leaves_.push_back( s.node() );
    }
  }

  bool leaf( Signal s, std::uint32_t row ) const
  {
    if ( s.node() == 0 )
    {
      return s.complemented();
    }
    const auto k = static_cast<std::size_t>( std::find( leaves_.begin(), leaves_.end(), s.node() ) - leaves_.begin() );
    return ( ( row >> k ) & 1u ) != s.complemented();
  }

  bool old_value( std::uint32_t row ) const
  {
    const auto& rf = g_.node( d_.root ).fanins;
    std::array<bool, 3> v{};
    for ( std::size_t p = 0; p < 3; ++p )
    {
      if ( expanded( p ) )
      {
        const auto& cf = g_.node( rf[p].node() ).fanins;
        v[p] = majority( leaf( cf[0], row ), leaf( cf[1], row ), leaf( cf[2], row ) ) != rf[p].complemented();
      }
      else
      {
        v[p] = leaf( rf[p], row );
      }
    }
    return majority( v[0], v[1], v[2] );
  }

  bool new_value( std::uint32_t row ) const
  {
    std::array<bool, 3> v{};
    for ( std::size_t p = 0; p < 3; ++p )
    {
      const auto& op = d_.replacement.root_fanins[p];
      if ( op.is_new )
      {
        const auto& n = d_.replacement.new_nodes.at( op.new_index );
        v[p] = majority( leaf( n[0], row ), leaf( n[1], row ), leaf( n[2], row ) ) != op.signal.complemented();
      }
      else
      {
        v[p] = leaf( op.signal, row );
      }
    }
    return majority( v[0], v[1], v[2] );
  }

  const MigGraph& g_;
  const MatchDescriptor& d_;
  std::vector<node_id> leaves_;
};

bool referenced( const MigGraph& g, node_id n )
{
  return !g.fanouts( n ).empty() || g.output_references( n ) > 0;
}

struct TripleHash
{
  std::size_t operator()( const std::array<std::uint32_t, 3>& t ) const
  {
    std::uint64_t h = 1469598103934665603ull;
    for ( const auto x : t )
    {
      h = ( h ^ x ) * 1099511628211ull;
    }
    return static_cast<std::size_t>( h );
  }
};

// key of a fanin triple and whether the key describes the complement
std::pair<std::array<std::uint32_t, 3>, bool> redundancy_key( const Node& n, bool canonical )
{
  std::array<std::uint32_t, 3> key{ n.fanins[0].literal(), n.fanins[1].literal(), n.fanins[2].literal() };
  if ( !canonical )
  {
    return { key, false };
  }
  const auto complemented = std::count_if( key.begin(), key.end(), []( std::uint32_t l ) { return l & 1u; } );
  const bool flip = complemented >= 2;
  if ( flip )
  {
    for ( auto& l : key )
    {
      l ^= 1u;
    }
  }
  std::sort( key.begin(), key.end() );
  return { key, flip };
}

} // namespace

std::optional<MatchDescriptor> match( const MigGraph& g, node_id node, OmegaAction action, const EngineOptions& options )
{
  if ( !g.is_majority( node ) )
  {
    throw std::invalid_argument( "match: node " + std::to_string( node ) + " is not a live majority node" );
  }
  switch ( action )
  {
  case OmegaAction::Identity:
  {
    MatchDescriptor d;
    d.root = node;
    d.action = action;
    return d;
  }
  case OmegaAction::Comm01: return match_comm( g, node, action, 0, 1 );
  case OmegaAction::Comm02: return match_comm( g, node, action, 0, 2 );
  case OmegaAction::Comm12: return match_comm( g, node, action, 1, 2 );
  case OmegaAction::Assoc: return match_assoc( g, node );
  case OmegaAction::ComplAssoc: return match_compl_assoc( g, node );
  case OmegaAction::DistLR: return match_dist_lr( g, node );
  case OmegaAction::DistRL: return match_dist_rl( g, node, options );
  case OmegaAction::InvProp: return match_inv_prop( g, node );
  }
  return std::nullopt;
}

ApplyResult apply_omega( MigGraph& g, const MatchDescriptor& d, const EngineOptions& options, std::vector<node_id>* created )
{
  if ( d.action == OmegaAction::Identity )
  {
    return ApplyResult::Applied;
  }
  if ( options.verify_local && !CutChecker( g, d ).equivalent() )
  {
    return ApplyResult::BlockedIllegal;
  }
  std::vector<Signal> fresh;
  for ( const auto& n : d.replacement.new_nodes )
  {
    fresh.push_back( g.add_majority( n[0], n[1], n[2] ) );
    if ( created )
    {
      created->push_back( fresh.back().node() );
    }
  }
  for ( std::size_t p = 0; p < 3; ++p )
  {
    const auto& op = d.replacement.root_fanins[p];
    const auto s = op.is_new ? fresh.at( op.new_index ) ^ op.signal.complemented() : op.signal;
    if ( g.node( d.root ).fanins[p] != s )
    {
      g.set_fanin( d.root, p, s );
    }
  }
  if ( d.replacement.complement_root )
  {
    g.complement_references( d.root );
  }
  return ApplyResult::Applied;
}

std::size_t lambda_majority( MigGraph& g )
{
  std::size_t count = 0;
  std::deque<node_id> work;
  std::vector<bool> queued( g.capacity(), false );
  for ( const auto n : g.topological_order() )
  {
    if ( g.is_majority( n ) )
    {
      work.push_back( n );
      queued[n] = true;
    }
  }
  while ( !work.empty() )
  {
    const auto n = work.front();
    work.pop_front();
    queued[n] = false;
    if ( !g.is_majority( n ) || !referenced( g, n ) )
    {
      continue;
    }
    const auto& f = g.node( n ).fanins;
    std::optional<Signal> with;
    if ( f[0] == f[1] || f[0] == f[2] )
    {
      with = f[0];
    }
    else if ( f[1] == f[2] )
    {
      with = f[1];
    }
    else if ( f[0] == !f[1] )
    {
      with = f[2];
    }
    else if ( f[0] == !f[2] )
    {
      with = f[1];
    }
    else if ( f[1] == !f[2] )
    {
      with = f[0];
    }
    if ( !with )
    {
      continue;
    }
    std::vector<node_id> consumers;
    for ( const auto& fo : g.fanouts( n ) )
    {
      consumers.push_back( fo.node );
    }
    g.replace_node( n, *with );
    ++count;
    for ( const auto c : consumers )
    {
      if ( !queued[c] )
      {
        queued[c] = true;
        work.push_back( c );
      }
    }
  }
  return count;
}

std::size_t lambda_redundancy( MigGraph& g, const EngineOptions& options )
{
  std::size_t count = 0;
  for ( bool changed = true; changed; )
  {
    changed = false;
    std::unordered_map<std::array<std::uint32_t, 3>, std::pair<node_id, bool>, TripleHash> table;
    for ( const auto n : g.topological_order() )
    {
      if ( !g.is_majority( n ) || !referenced( g, n ) )
      {
        continue;
      }
      const auto [key, flip] = redundancy_key( g.node( n ), options.canonical_redundancy );
      const auto [it, inserted] = table.try_emplace( key, n, flip );
      if ( inserted )
      {
        continue;
      }
      const auto [other, other_flip] = it->second;
      const auto survivor = std::min( other, n );
      const auto victim = std::max( other, n );
      g.replace_node( victim, Signal( survivor, flip != other_flip ) );
      it->second = { survivor, survivor == n ? flip : other_flip };
      ++count;
      changed = true;
    }
  }
  return count;
}

LambdaCounts lambda_fixpoint( MigGraph& g, const EngineOptions& options )
{
  LambdaCounts total;
  for ( ;; )
  {
    const auto m = lambda_majority( g );
    const auto r = lambda_redundancy( g, options );
    total.majority += m;
    total.redundancy += r;
    if ( m + r == 0 )
    {
      return total;
    }
  }
}

StepReport step( MigGraph& g, const ActionMap& actions, const EngineOptions& options )
{
  for ( const auto& [n, a] : actions )
  {
    if ( !g.is_majority( n ) )
    {
      throw std::invalid_argument( "step: action keyed by non-majority node " + std::to_string( n ) );
    }
  }
  StepReport report;
  report.size_before = g.size();
  std::vector<bool> touched( g.capacity(), false );
  std::vector<node_id> created;
  for ( const auto& [n, a] : actions )
  {
    ActionOutcome outcome;
    if ( a == OmegaAction::Identity )
    {
      outcome = ActionOutcome::Identity;
      ++report.identity_count;
    }
    else if ( auto m = match( g, n, a, options ); !m )
    {
      outcome = ActionOutcome::BlockedIllegal;
      ++report.blocked_illegal;
    }
    else if ( std::any_of( m->footprint.begin(), m->footprint.end(), [&]( node_id x ) { return touched[x]; } ) )
    {
      outcome = ActionOutcome::BlockedCollision;
      ++report.blocked_collision;
    }
    else
    {
      created.clear();
      if ( apply_omega( g, *m, options, &created ) == ApplyResult::Applied )
      {
        outcome = ActionOutcome::Applied;
        ++report.applied;
        report.nodes_created += created.size();
        touched.resize( g.capacity(), false );
        for ( const auto x : m->footprint )
        {
          touched[x] = true;
        }
        for ( const auto x : created )
        {
          touched[x] = true;
        }
      }
      else
      {
        outcome = ActionOutcome::BlockedIllegal;
        ++report.blocked_illegal;
      }
    }
    report.outcomes.emplace( n, outcome );
  }
  report.nodes_removed = g.remove_dangling();
  const auto lambda = lambda_fixpoint( g, options );
  report.lambda_m_count = lambda.majority;
  report.lambda_r_count = lambda.redundancy;
  report.nodes_removed += g.remove_dangling();
  report.size_after = g.size();
  return report;
}

} // namespace migopt
