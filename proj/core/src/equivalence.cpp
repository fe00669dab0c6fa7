#include "migopt/equivalence.hpp"

#include <algorithm>
#include <stdexcept>

#include "migopt/simulation.hpp"

namespace migopt
{

namespace
{

void check_shapes( const MigGraph& a, const MigGraph& b )
{
  if ( a.pi_count() != b.pi_count() || a.outputs().size() != b.outputs().size() )
  {
    throw std::invalid_argument( "equivalence check: graphs differ in input or output count" );
  }
}

} // namespace

bool check_equivalence_exact( const MigGraph& a, const MigGraph& b )
{
  check_shapes( a, b );
  return simulate_truth_tables( a ) == simulate_truth_tables( b );
}

bool check_equivalence_signatures( const MigGraph& a, const MigGraph& b, std::span<const std::uint64_t> seeds, std::uint32_t width )
{
  check_shapes( a, b );
  for ( const auto seed : seeds )
  {
    if ( simulate_signatures( a, seed, width ).outputs != simulate_signatures( b, seed, width ).outputs )
    {
      return false;
    }
  }
  return true;
}

std::string_view to_string( Verdict v )
{
  switch ( v )
  {
  case Verdict::Equivalent: return "equivalent";
  case Verdict::NotEquivalent: return "not_equivalent";
  case Verdict::SignaturesAgree: return "signatures_agree";
  }
  return "?";
}

Verdict verify_equivalence( const MigGraph& a, const MigGraph& b, std::uint32_t exact_limit )
{
  check_shapes( a, b );
  if ( a.pi_count() <= std::min( exact_limit, kMaxTruthTableInputs ) )
  {
    return check_equivalence_exact( a, b ) ? Verdict::Equivalent : Verdict::NotEquivalent;
  }
  return check_equivalence_signatures( a, b ) ? Verdict::SignaturesAgree : Verdict::NotEquivalent;
}

} // namespace migopt
