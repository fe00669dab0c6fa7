#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "migopt/equivalence.hpp"
#include "migopt/io.hpp"
#include "migopt/rewrite.hpp"
#include "migopt/simulation.hpp"
#include "oracles.hpp"

using namespace migopt;
using migopt::oracle::naive_tables;

namespace
{

// the tables of `g` must not move under `mutate`
template<class F>
void expect_function_kept( MigGraph& g, F&& mutate )
{
  const auto before = naive_tables( g );
  mutate( g );
  EXPECT_EQ( naive_tables( g ), before );
}

} // namespace

TEST( Match, AssocBindsSharedOperandOnAnyPort )
{
  // M(x,u,M(y,u,z)) written with the ports of both levels shuffled
  for ( int layout = 0; layout < 6; ++layout )
  {
    MigGraph g( 4 );
    const auto x = g.pi( 0 ), u = g.pi( 1 ), y = g.pi( 2 ), z = g.pi( 3 );
    const auto child = g.add_majority( layout & 1 ? z : y, u, layout & 1 ? y : z );
    std::array<Signal, 3> top{ x, u, child };
    std::rotate( top.begin(), top.begin() + layout % 3, top.end() );
    const auto root = g.add_majority( top[0], top[1], top[2] );
    g.add_output( root );

    const auto m = match( g, root.node(), OmegaAction::Assoc );
    ASSERT_TRUE( m ) << layout;
    EXPECT_EQ( *m->child, child.node() );
    EXPECT_EQ( g.node( root.node() ).fanins[m->shared_port], u );
    EXPECT_EQ( m->footprint.front(), root.node() );
    expect_function_kept( g, [&]( MigGraph& h ) { EXPECT_EQ( apply_omega( h, *m ), ApplyResult::Applied ); } );
  }
}

TEST( Match, AssocRewritesToSwappedOuterOperand )
{
  MigGraph g( 4 );
  const auto x = g.pi( 0 ), u = g.pi( 1 ), y = g.pi( 2 ), z = g.pi( 3 );
  const auto root = g.add_majority( x, u, g.add_majority( y, u, z ) );
  g.add_output( root );
  const auto m = match( g, root.node(), OmegaAction::Assoc );
  ASSERT_TRUE( m );
  ASSERT_EQ( apply_omega( g, *m ), ApplyResult::Applied );
  g.remove_dangling();
  // M(z,u,M(y,u,x))
  const auto& rf = g.node( root.node() ).fanins;
  EXPECT_EQ( rf[0], y );
  EXPECT_EQ( rf[1], u );
  const auto& cf = g.node( rf[2].node() ).fanins;
  EXPECT_EQ( cf[0], x );
  EXPECT_EQ( cf[1], u );
  EXPECT_EQ( cf[2], z );
}

TEST( Match, AssocNeedsMajorityChild )
{
  MigGraph g( 3 );
  const auto n = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.pi( 2 ) );
  g.add_output( n );
  EXPECT_FALSE( match( g, n.node(), OmegaAction::Assoc ) );
  EXPECT_FALSE( match( g, n.node(), OmegaAction::ComplAssoc ) );
  EXPECT_FALSE( match( g, n.node(), OmegaAction::DistLR ) );
  EXPECT_FALSE( match( g, n.node(), OmegaAction::DistRL ) );
  for ( const auto a : { OmegaAction::Identity, OmegaAction::Comm01, OmegaAction::Comm02, OmegaAction::Comm12, OmegaAction::InvProp } )
  {
    EXPECT_TRUE( match( g, n.node(), a ) ) << to_string( a );
  }
}

TEST( Match, IdentityHasEmptyFootprint )
{
  MigGraph g( 3 );
  const auto n = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.pi( 2 ) );
  const auto m = match( g, n.node(), OmegaAction::Identity );
  ASSERT_TRUE( m );
  EXPECT_TRUE( m->footprint.empty() );
}

TEST( Match, RejectsNonMajorityNode )
{
  MigGraph g( 2 );
  EXPECT_THROW( match( g, 1, OmegaAction::Identity ), std::invalid_argument );
  EXPECT_THROW( match( g, 0, OmegaAction::Assoc ), std::invalid_argument );
}

TEST( Match, ComplAssocOnComplementedShare )
{
  MigGraph g( 4 );
  const auto x = g.pi( 0 ), u = g.pi( 1 ), y = g.pi( 2 ), z = g.pi( 3 );
  const auto root = g.add_majority( x, u, g.add_majority( y, !u, z ) );
  g.add_output( root );
  EXPECT_FALSE( match( g, root.node(), OmegaAction::Assoc ) );
  const auto m = match( g, root.node(), OmegaAction::ComplAssoc );
  ASSERT_TRUE( m );
  expect_function_kept( g, [&]( MigGraph& h ) { ASSERT_EQ( apply_omega( h, *m ), ApplyResult::Applied ); } );
  // M(x,u,M(y,x,z))
  const auto& cf = g.node( g.node( root.node() ).fanins[2].node() ).fanins;
  EXPECT_EQ( cf[0], y );
  EXPECT_EQ( cf[1], x );
  EXPECT_EQ( cf[2], z );
}

TEST( Match, MatchesThroughComplementedChildEdge )
{
  // !M(!y,!u,!z) is M(y,u,z); the share must be seen through the inverter
  MigGraph g( 4 );
  const auto x = g.pi( 0 ), u = g.pi( 1 ), y = g.pi( 2 ), z = g.pi( 3 );
  const auto root = g.add_majority( x, u, !g.add_majority( !y, !u, !z ) );
  g.add_output( root );
  const auto m = match( g, root.node(), OmegaAction::Assoc );
  ASSERT_TRUE( m );
  expect_function_kept( g, [&]( MigGraph& h ) { ASSERT_EQ( apply_omega( h, *m ), ApplyResult::Applied ); } );
}

TEST( Apply, Comm01SwapsPorts )
{
  MigGraph g( 3 );
  const auto a = g.pi( 0 ), b = g.pi( 1 ), c = g.pi( 2 );
  const auto n = g.add_majority( a, b, !c );
  g.add_output( n );
  expect_function_kept( g, [&]( MigGraph& h ) { apply_omega( h, *match( h, n.node(), OmegaAction::Comm01 ) ); } );
  const auto& f = g.node( n.node() ).fanins;
  EXPECT_EQ( f[0], b );
  EXPECT_EQ( f[1], a );
  EXPECT_EQ( f[2], !c );
  apply_omega( g, *match( g, n.node(), OmegaAction::Comm12 ) );
  EXPECT_EQ( g.node( n.node() ).fanins[1], !c );
  apply_omega( g, *match( g, n.node(), OmegaAction::Comm02 ) );
  EXPECT_EQ( g.node( n.node() ).fanins[0], a );
}

TEST( Apply, InvPropFlipsFaninsAndFanouts )
{
  MigGraph g( 4 );
  const auto n = g.add_majority( g.pi( 0 ), !g.pi( 1 ), g.pi( 2 ) );
  const auto top = g.add_majority( !n, g.pi( 3 ), g.pi( 0 ) );
  g.add_output( top );
  const auto m = match( g, n.node(), OmegaAction::InvProp );
  ASSERT_TRUE( m );
  EXPECT_NE( std::find( m->footprint.begin(), m->footprint.end(), top.node() ), m->footprint.end() );
  expect_function_kept( g, [&]( MigGraph& h ) { ASSERT_EQ( apply_omega( h, *m ), ApplyResult::Applied ); } );
  const auto& f = g.node( n.node() ).fanins;
  EXPECT_EQ( f[0], !g.pi( 0 ) );
  EXPECT_EQ( f[1], g.pi( 1 ) );
  EXPECT_EQ( f[2], !g.pi( 2 ) );
  EXPECT_EQ( g.node( top.node() ).fanins[0], n );
}

TEST( Apply, InvPropOnOutputComplementsOutput )
{
  MigGraph g( 3 );
  const auto n = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.pi( 2 ) );
  g.add_output( n );
  g.add_output( !n );
  expect_function_kept( g, [&]( MigGraph& h ) { apply_omega( h, *match( h, n.node(), OmegaAction::InvProp ) ); } );
  EXPECT_EQ( g.outputs()[0], !n );
  EXPECT_EQ( g.outputs()[1], n );
}

TEST( Apply, DistRLRemovesOneNode )
{
  MigGraph g( 5 );
  const auto x = g.pi( 0 ), y = g.pi( 1 ), u = g.pi( 2 ), v = g.pi( 3 ), z = g.pi( 4 );
  const auto root = g.add_majority( g.add_majority( x, y, u ), g.add_majority( x, y, v ), z );
  g.add_output( root );
  ASSERT_EQ( g.size(), 3u );

  MigGraph factored( 5 );
  factored.add_output( factored.add_majority( x, y, factored.add_majority( u, v, z ) ) );

  const auto before = naive_tables( g );
  const auto report = step( g, { { root.node(), OmegaAction::DistRL } } );
  EXPECT_EQ( report.applied, 1u );
  EXPECT_EQ( report.nodes_created, 1u );
  EXPECT_EQ( report.nodes_removed, 2u );
  EXPECT_EQ( g.size(), factored.size() );
  EXPECT_EQ( g.size(), 2u );
  EXPECT_EQ( naive_tables( g ), before );
  EXPECT_EQ( naive_tables( factored ), before );
}

TEST( Apply, DistRLFindsPermutedSharedPair )
{
  MigGraph g( 5 );
  const auto x = g.pi( 0 ), y = g.pi( 1 ), u = g.pi( 2 ), v = g.pi( 3 ), z = g.pi( 4 );
  const auto root = g.add_majority( z, g.add_majority( u, y, x ), g.add_majority( x, v, y ) );
  g.add_output( root );
  expect_function_kept( g, [&]( MigGraph& h ) {
    const auto r = step( h, { { root.node(), OmegaAction::DistRL } } );
    EXPECT_EQ( r.applied, 1u );
  } );
  EXPECT_EQ( g.size(), 2u );
}

TEST( Apply, DistLRGrowsByOne )
{
  MigGraph g( 5 );
  const auto root = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.add_majority( g.pi( 2 ), g.pi( 3 ), g.pi( 4 ) ) );
  g.add_output( root );
  ASSERT_EQ( g.size(), 2u );
  expect_function_kept( g, [&]( MigGraph& h ) {
    const auto r = step( h, { { root.node(), OmegaAction::DistLR } } );
    EXPECT_EQ( r.applied, 1u );
    EXPECT_EQ( r.nodes_created, 2u );
    EXPECT_EQ( r.nodes_removed, 1u );
  } );
  EXPECT_EQ( g.size(), 3u );
}

TEST( Apply, LocalCheckBlocksWrongRewrite )
{
  MigGraph g( 5 );
  const auto x = g.pi( 0 ), y = g.pi( 1 ), u = g.pi( 2 ), v = g.pi( 3 ), z = g.pi( 4 );
  const auto root = g.add_majority( g.add_majority( x, y, u ), g.add_majority( x, y, v ), z );
  g.add_output( root );
  const EngineOptions broken{ .fault = FaultInjection::BreakDistRL };
  const auto m = match( g, root.node(), OmegaAction::DistRL, broken );
  ASSERT_TRUE( m );
  const auto copy = g;
  EXPECT_EQ( apply_omega( g, *m, broken ), ApplyResult::BlockedIllegal );
  EXPECT_EQ( g, copy );

  // without the check the same rewrite corrupts the function
  auto unchecked = broken;
  unchecked.verify_local = false;
  EXPECT_EQ( apply_omega( g, *m, unchecked ), ApplyResult::Applied );
  EXPECT_NE( naive_tables( g ), naive_tables( copy ) );
}

TEST( Lambda, MajorityIdenticalFanins )
{
  MigGraph g( 2 );
  const auto n = g.add_majority( g.pi( 0 ), g.pi( 0 ), g.pi( 1 ) );
  g.add_output( n );
  g.add_output( g.add_majority( n, g.pi( 1 ), !g.pi( 0 ) ) );
  EXPECT_EQ( lambda_majority( g ), 2u );
  EXPECT_EQ( g.outputs()[0], g.pi( 0 ) );
  // M(x1, x2, !x1) = x2 once n is x1
  EXPECT_EQ( g.outputs()[1], g.pi( 1 ) );
}

TEST( Lambda, MajorityComplementaryFanins )
{
  MigGraph g( 2 );
  g.add_output( g.add_majority( g.pi( 0 ), !g.pi( 0 ), g.pi( 1 ) ) );
  EXPECT_EQ( lambda_majority( g ), 1u );
  EXPECT_EQ( g.outputs()[0], g.pi( 1 ) );
}

TEST( Lambda, MajorityPolarityComposes )
{
  MigGraph g( 2 );
  g.add_output( !g.add_majority( g.pi( 0 ), g.pi( 0 ), g.pi( 1 ) ) );
  const auto before = naive_tables( g );
  lambda_majority( g );
  EXPECT_EQ( g.outputs()[0], !g.pi( 0 ) );
  EXPECT_EQ( naive_tables( g ), before );
  // x1 = 0b01 over 2 inputs, so !x1 has rows 0 and 2 set
  EXPECT_EQ( before[0], ( std::vector<bool>{ true, false, true, false } ) );
}

TEST( Lambda, RedundancyMergesIdenticalTriples )
{
  MigGraph g( 3 );
  const auto a = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() );
  const auto b = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() );
  g.add_output( g.add_majority( a, b, g.pi( 2 ) ) );
  g.add_output( b );
  EXPECT_EQ( lambda_redundancy( g ), 1u );
  EXPECT_EQ( g.outputs()[1], a );
  EXPECT_EQ( g.node( g.outputs()[0].node() ).fanins[1], a );
  g.remove_dangling();
  EXPECT_FALSE( g.is_live( b.node() ) );
}

TEST( Lambda, RedundancyIsOrdered )
{
  MigGraph g( 2 );
  g.add_output( g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() ) );
  g.add_output( g.add_majority( g.pi( 1 ), g.pi( 0 ), g.constant() ) );
  EXPECT_EQ( lambda_redundancy( g ), 0u );
  EXPECT_EQ( g.size(), 2u );

  // the canonical mode sees through the permutation and through full complementation
  MigGraph k( 2 );
  const auto p = k.add_majority( k.pi( 0 ), k.pi( 1 ), k.constant() );
  k.add_output( p );
  k.add_output( k.add_majority( k.pi( 1 ), k.pi( 0 ), k.constant() ) );
  k.add_output( k.add_majority( !k.pi( 1 ), !k.pi( 0 ), k.constant( true ) ) );
  const auto before = naive_tables( k );
  EXPECT_EQ( lambda_redundancy( k, { .canonical_redundancy = true } ), 2u );
  EXPECT_EQ( k.outputs()[1], p );
  EXPECT_EQ( k.outputs()[2], !p );
  EXPECT_EQ( naive_tables( k ), before );
}

TEST( Lambda, NoDuplicatesLeavesGraphUnchanged )
{
  std::mt19937_64 rng( 11 );
  auto g = migopt::oracle::random_raw_graph( rng, 6, 30, 3 );
  lambda_fixpoint( g );
  const auto copy = g;
  EXPECT_EQ( lambda_redundancy( g ), 0u );
  EXPECT_EQ( lambda_majority( g ), 0u );
  EXPECT_EQ( g, copy );
}

TEST( Lambda, FixpointIsIdempotentAndPreservesFunction )
{
  std::mt19937_64 rng( 5 );
  for ( int t = 0; t < 200; ++t )
  {
    auto g = migopt::oracle::random_raw_graph( rng, 5, 40, 4 );
    expect_function_kept( g, []( MigGraph& h ) { lambda_fixpoint( h ); } );
    const auto again = lambda_fixpoint( g );
    EXPECT_EQ( again.majority, 0u );
    EXPECT_EQ( again.redundancy, 0u );
  }
}

TEST( Step, AllIdentityKeepsGraph )
{
  std::mt19937_64 rng( 3 );
  auto g = migopt::oracle::random_raw_graph( rng, 6, 25, 2 );
  lambda_fixpoint( g );
  g.remove_dangling();
  const auto text = emit_mig( g );
  ActionMap actions;
  for ( const auto n : g.reachable_gates() )
  {
    actions[n] = OmegaAction::Identity;
  }
  const auto r = step( g, actions );
  EXPECT_EQ( r.applied, 0u );
  EXPECT_EQ( r.identity_count, actions.size() );
  EXPECT_EQ( r.size_before, r.size_after );
  EXPECT_EQ( emit_mig( g ), text );
}

TEST( Step, AdjacentAssocCollide )
{
  MigGraph g( 5 );
  const auto u = g.pi( 1 );
  const auto a = g.add_majority( g.pi( 0 ), u, g.pi( 2 ) );
  const auto b = g.add_majority( g.pi( 3 ), u, a );
  const auto c = g.add_majority( g.pi( 4 ), u, b );
  g.add_output( c );
  ASSERT_TRUE( match( g, b.node(), OmegaAction::Assoc ) );
  ASSERT_TRUE( match( g, c.node(), OmegaAction::Assoc ) );
  expect_function_kept( g, [&]( MigGraph& h ) {
    const auto r = step( h, { { b.node(), OmegaAction::Assoc }, { c.node(), OmegaAction::Assoc } } );
    EXPECT_EQ( r.applied, 1u );
    EXPECT_EQ( r.blocked_collision, 1u );
    EXPECT_EQ( r.outcomes.at( b.node() ), ActionOutcome::Applied );
    EXPECT_EQ( r.outcomes.at( c.node() ), ActionOutcome::BlockedCollision );
  } );
}

TEST( Step, NoMatchCountsAsIllegal )
{
  MigGraph g( 3 );
  const auto n = g.add_majority( g.pi( 0 ), g.pi( 1 ), g.pi( 2 ) );
  g.add_output( n );
  const auto text = emit_mig( g );
  const auto r = step( g, { { n.node(), OmegaAction::DistRL } } );
  EXPECT_EQ( r.blocked_illegal, 1u );
  EXPECT_EQ( r.outcomes.at( n.node() ), ActionOutcome::BlockedIllegal );
  EXPECT_EQ( emit_mig( g ), text );
}

TEST( Step, RejectsActionsOnNonGates )
{
  MigGraph g( 2 );
  g.add_output( g.add_majority( g.pi( 0 ), g.pi( 1 ), g.constant() ) );
  EXPECT_THROW( step( g, { { 1, OmegaAction::Identity } } ), std::invalid_argument );
  EXPECT_THROW( step( g, { { 99, OmegaAction::Identity } } ), std::invalid_argument );
}

TEST( Step, BlockedActionsLeaveGraphIdentical )
{
  // every action blocked by the local check: nothing may change
  MigGraph g( 5 );
  const auto x = g.pi( 0 ), y = g.pi( 1 ), u = g.pi( 2 ), v = g.pi( 3 ), z = g.pi( 4 );
  const auto root = g.add_majority( g.add_majority( x, y, u ), g.add_majority( x, y, v ), z );
  g.add_output( root );
  const auto copy = g;
  const auto r = step( g, { { root.node(), OmegaAction::DistRL } }, { .fault = FaultInjection::BreakDistRL } );
  EXPECT_EQ( r.blocked_illegal, 1u );
  EXPECT_EQ( g, copy );
  EXPECT_EQ( emit_mig( g ), emit_mig( copy ) );
}

TEST( Step, AccountingAndDeterminism )
{
  std::mt19937_64 rng( 21 );
  for ( int t = 0; t < 100; ++t )
  {
    auto g = migopt::oracle::random_raw_graph( rng, 7, 40, 3 );
    lambda_fixpoint( g );
    g.remove_dangling();
    for ( int s = 0; s < 5; ++s )
    {
      const auto actions = migopt::oracle::random_actions( g, rng );
      auto twin = g;
      const auto before = naive_tables( g );
      const auto r = step( g, actions );
      const auto r2 = step( twin, actions );
      EXPECT_EQ( g, twin );
      EXPECT_EQ( r.outcomes, r2.outcomes );
      EXPECT_EQ( r.lambda_m_count, r2.lambda_m_count );
      EXPECT_EQ( r.lambda_r_count, r2.lambda_r_count );
      EXPECT_EQ( r.applied + r.blocked_illegal + r.blocked_collision + r.identity_count, actions.size() );
      EXPECT_EQ( r.outcomes.size(), actions.size() );
      EXPECT_EQ( static_cast<long>( r.size_after ) - static_cast<long>( r.size_before ),
                 static_cast<long>( r.nodes_created ) - static_cast<long>( r.nodes_removed ) );
      EXPECT_EQ( r.size_after, g.size() );
      EXPECT_EQ( naive_tables( g ), before );
      EXPECT_EQ( lambda_fixpoint( g ).majority, 0u );
    }
  }
}

TEST( Step, HundredRandomStepsKeepSignatures )
{
  std::mt19937_64 rng( 8 );
  auto g = migopt::oracle::random_raw_graph( rng, 40, 50, 4 );
  const auto original = g;
  for ( int s = 0; s < 100; ++s )
  {
    step( g, migopt::oracle::random_actions( g, rng ) );
  }
  EXPECT_TRUE( check_equivalence_signatures( original, g ) );
  EXPECT_EQ( verify_equivalence( original, g ), Verdict::SignaturesAgree );
}

TEST( Equivalence, BasicCases )
{
  MigGraph a( 2 ), o( 2 );
  a.add_output( a.add_majority( a.pi( 0 ), a.pi( 1 ), a.constant() ) );
  o.add_output( o.add_majority( o.pi( 0 ), o.pi( 1 ), o.constant( true ) ) );
  EXPECT_TRUE( check_equivalence_exact( a, a ) );
  EXPECT_FALSE( check_equivalence_exact( a, o ) );
  EXPECT_EQ( verify_equivalence( a, o ), Verdict::NotEquivalent );
  EXPECT_EQ( verify_equivalence( a, a ), Verdict::Equivalent );
  EXPECT_FALSE( check_equivalence_signatures( a, o ) );

  MigGraph three( 3 );
  three.add_output( three.pi( 0 ) );
  EXPECT_THROW( check_equivalence_exact( a, three ), std::invalid_argument );
  MigGraph two_out( 2 );
  two_out.add_output( two_out.pi( 0 ) );
  two_out.add_output( two_out.pi( 1 ) );
  EXPECT_THROW( check_equivalence_exact( a, two_out ), std::invalid_argument );
}

TEST( Equivalence, ExactAfterFiftySteps )
{
  std::mt19937_64 rng( 77 );
  for ( int t = 0; t < 20; ++t )
  {
    auto g = migopt::oracle::random_raw_graph( rng, 8, 60, 3 );
    const auto original = g;
    for ( int s = 0; s < 50; ++s )
    {
      step( g, migopt::oracle::random_actions( g, rng ) );
    }
    EXPECT_TRUE( check_equivalence_exact( original, g ) );
  }
}

TEST( Equivalence, SignaturesCatchSingleFlipOnWideGraph )
{
  std::mt19937_64 rng( 2 );
  auto g = migopt::oracle::random_raw_graph( rng, 30, 80, 2 );
  lambda_fixpoint( g );
  g.remove_dangling();
  auto h = g;
  h.set_output( 0, !h.outputs()[0] );
  EXPECT_FALSE( check_equivalence_signatures( g, h ) );
  EXPECT_EQ( verify_equivalence( g, h ), Verdict::NotEquivalent );
}
