#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "migopt/mig_graph.hpp"

namespace migopt
{

/// Output truth tables agree. Throws std::invalid_argument on mismatched
/// PI/output counts or more than 16 inputs.
bool check_equivalence_exact( const MigGraph& a, const MigGraph& b );

inline constexpr std::array<std::uint64_t, 3> kDefaultSignatureSeeds = { 0x5eed0001ull, 0x5eed0002ull, 0x5eed0003ull };
inline constexpr std::uint32_t kDefaultSignatureWidth = 256;

/// Output signatures agree for every seed.
bool check_equivalence_signatures( const MigGraph& a, const MigGraph& b,
                                   std::span<const std::uint64_t> seeds = kDefaultSignatureSeeds,
                                   std::uint32_t width = kDefaultSignatureWidth );

enum class Verdict : std::uint8_t
{
  Equivalent,      ///< proved by exhaustive simulation
  NotEquivalent,   ///< a distinguishing pattern exists
  SignaturesAgree  ///< consistent, but too many inputs to prove
};

std::string_view to_string( Verdict v );

/// Exact up to `exact_limit` inputs, three-seed signatures beyond.
Verdict verify_equivalence( const MigGraph& a, const MigGraph& b, std::uint32_t exact_limit = 16 );

} // namespace migopt
