#include <gtest/gtest.h>

#include <random>

#include "migopt/mig_graph.hpp"
#include "migopt/rewrite.hpp"
#include "migopt/simulation.hpp"
#include "oracles.hpp"

using namespace migopt;

TEST( MigGraph, FreshGraphHasConstantAndInputs )
{
  MigGraph g0( 0 );
  EXPECT_EQ( g0.capacity(), 1u );
  EXPECT_EQ( g0.size(), 0u );
  EXPECT_EQ( g0.node( 0 ).kind, NodeKind::Const0 );

  MigGraph g3( 3 );
  EXPECT_EQ( g3.capacity(), 4u );
  EXPECT_EQ( g3.size(), 0u );
  EXPECT_TRUE( g3.outputs().empty() );

  MigGraph g100( 100 );
  EXPECT_EQ( g100.capacity(), 101u );
  for ( node_id n = 1; n <= 100; ++n )
  {
    EXPECT_EQ( g100.node( n ).kind, NodeKind::PrimaryInput );
    EXPECT_EQ( g100.node( n ).pi_index, n - 1 );
  }
}

TEST( MigGraph, SignalPacking )
{
  const Signal s( 7, true );
  EXPECT_EQ( s.node(), 7u );
  EXPECT_TRUE( s.complemented() );
  EXPECT_EQ( s.literal(), 15u );
  EXPECT_EQ( !s, Signal( 7, false ) );
  EXPECT_EQ( s ^ true, Signal( 7 ) );
  EXPECT_EQ( Signal::from_literal( 14 ), Signal( 7 ) );
}

TEST( MigGraph, AddMajorityKeepsPortOrderAndDoesNotSimplify )
{
  MigGraph g( 2 );
  const auto x1 = g.pi( 0 ), x2 = g.pi( 1 );
  const auto n = g.add_majority( x1, x1, x2 );
  EXPECT_FALSE( n.complemented() );
  const auto& f = g.node( n.node() ).fanins;
  EXPECT_EQ( f[0], x1 );
  EXPECT_EQ( f[1], x1 );
  EXPECT_EQ( f[2], x2 );
  g.add_output( n );
  EXPECT_EQ( g.size(), 1u );
  lambda_majority( g );
  EXPECT_EQ( g.outputs()[0], x1 );
}

TEST( MigGraph, AndOrByEnumeration )
{
  MigGraph g( 2 );
  g.add_output( g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant( false ) ) );
  g.add_output( g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant( true ) ) );
  for ( std::uint64_t r = 0; r < 4; ++r )
  {
    const bool a = r & 1, b = r & 2;
    const auto v = oracle::eval_outputs( g, r );
    EXPECT_EQ( v[0], a && b );
    EXPECT_EQ( v[1], a || b );
  }
}

TEST( MigGraph, RejectsUnknownOrDeadFanins )
{
  MigGraph g( 2 );
  EXPECT_THROW( g.add_majority( g.pi( 0 ), g.pi( 1 ), Signal( 9 ) ), GraphError );
  const auto dead = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() );
  g.add_output( g.pi( 0 ) );
  EXPECT_EQ( g.remove_dangling(), 1u );
  EXPECT_FALSE( g.is_live( dead.node() ) );
  EXPECT_THROW( g.add_majority( dead, g.pi( 0 ), g.pi( 1 ) ), GraphError );
  EXPECT_THROW( g.add_output( dead ), GraphError );
}

TEST( MigGraph, SizeCountsReachableMajorityOnly )
{
  // (x1 x2) + x3
  MigGraph g( 3 );
  const auto a = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() );
  g.add_output( g.add_majority( a, g.pi( 2 ), g.constant( true ) ) );
  EXPECT_EQ( g.size(), 2u );
  g.add_majority( g.pi( 0 ), g.pi( 2 ), g.pi( 1 ) );
  EXPECT_EQ( g.size(), 2u );
  EXPECT_EQ( g.gates().size(), 3u );

  MigGraph h( 5 );
  h.add_output( h.pi( 2 ) );
  EXPECT_EQ( h.size(), 0u );
}

TEST( MigGraph, ReachabilityAndTopologicalOrder )
{
  MigGraph g( 3 );
  const auto n1 = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.pi( 2 ) );
  const auto n2 = g.add_majority( n1, g.pi( 1 ), g.pi( 2 ) );
  const auto n3 = g.add_majority( n2, g.pi( 0 ), g.pi( 2 ) );
  const auto stray = g.add_majority( g.pi( 0 ), !g.pi( 1 ), g.pi( 2 ) );
  g.add_output( n3 );

  const auto reach = g.reachable_gates();
  EXPECT_EQ( reach, ( std::vector<node_id>{ n1.node(), n2.node(), n3.node() } ) );
  const auto topo = g.topological_order();
  auto pos = [&]( node_id n ) { return std::find( topo.begin(), topo.end(), n ) - topo.begin(); };
  EXPECT_LT( pos( n1.node() ), pos( n2.node() ) );
  EXPECT_LT( pos( n2.node() ), pos( n3.node() ) );
  EXPECT_NE( std::find( topo.begin(), topo.end(), stray.node() ), topo.end() );
}

TEST( MigGraph, FanoutsTrackMutations )
{
  MigGraph g( 3 );
  const auto n1 = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.pi( 2 ) );
  const auto n2 = g.add_majority( n1, !n1, g.pi( 2 ) );
  ASSERT_EQ( g.fanouts( n1.node() ).size(), 2u );
  g.set_fanin( n2.node(), 1, g.pi( 0 ) );
  ASSERT_EQ( g.fanouts( n1.node() ).size(), 1u );
  EXPECT_EQ( g.fanouts( n1.node() )[0].port, 0u );
  g.add_output( !n1 );
  g.replace_node( n1.node(), !g.pi( 1 ) );
  EXPECT_EQ( g.node( n2.node() ).fanins[0], !g.pi( 1 ) );
  EXPECT_EQ( g.outputs()[0], g.pi( 1 ) );
  EXPECT_TRUE( g.fanouts( n1.node() ).empty() );
}

TEST( MigGraph, IdentifiersAreNeverReused )
{
  MigGraph g( 2 );
  const auto a = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() );
  g.add_output( g.pi( 0 ) );
  g.remove_dangling();
  const auto b = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() );
  EXPECT_GT( b.node(), a.node() );
}

TEST( MigGraph, CompactRenumbersAndPreservesFunction )
{
  std::mt19937_64 rng( 11 );
  for ( int t = 0; t < 50; ++t )
  {
    auto g = oracle::random_raw_graph( rng, 6, 30, 2 );
    const auto c = g.compact();
    EXPECT_EQ( c.size(), g.size() );
    EXPECT_EQ( c.capacity(), 7 + c.size() );
    EXPECT_EQ( oracle::naive_tables( c ), oracle::naive_tables( g ) );
  }
}

TEST( MigGraph, AcyclicAfterRandomSteps )
{
  std::mt19937_64 rng( 3 );
  for ( int t = 0; t < 20; ++t )
  {
    auto g = oracle::random_raw_graph( rng, 5, 25, 2 );
    for ( int s = 0; s < 10; ++s )
    {
      step( g, oracle::random_actions( g, rng ) );
      EXPECT_NO_THROW( g.topological_order() );
    }
  }
}

TEST( MigGraph, SizeInvariantUnderUnreachableAdditions )
{
  std::mt19937_64 rng( 5 );
  for ( int t = 0; t < 20; ++t )
  {
    auto g = oracle::random_raw_graph( rng, 8, 20, 1 );
    const auto before = g.size();
    for ( int k = 0; k < 10; ++k )
      g.add_majority( Signal( static_cast<node_id>( rng() % g.capacity() ) ), g.pi( 0 ), g.pi( 1 ) );
    EXPECT_EQ( g.size(), before );
  }
}
