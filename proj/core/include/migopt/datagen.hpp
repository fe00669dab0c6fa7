#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>

#include "migopt/io.hpp"
#include "migopt/mig_graph.hpp"
#include "migopt/simulation.hpp"

namespace migopt
{

struct RandomGraphSpec
{
  std::uint32_t pi_count = 100;
  std::uint32_t po_count = 2;
  std::uint32_t target_size = 50;
  std::uint64_t seed = 0;
  /// Restarts before giving up.
  std::uint32_t max_attempts = 64;
};

/// Uniform integer in [0, bound) by rejection; identical on every platform.
std::uint64_t uniform_below( std::mt19937_64& rng, std::uint64_t bound );

/// splitmix64 finaliser, used to derive per-item seeds.
std::uint64_t mix_seed( std::uint64_t seed, std::uint64_t index );

/*! \brief Random Λ-clean MIG with exactly `target_size` reachable gates.
 *
 * Gates are added one at a time with fanins drawn uniformly from the
 * constant, the inputs and the existing gates, each with a random polarity.
 * Throws std::runtime_error when no attempt reaches the target.
 */
MigGraph random_mig( const RandomGraphSpec& spec );

/// `count` graphs, item i generated with mix_seed(spec.seed, i).
Dataset random_dataset( const RandomGraphSpec& spec, std::size_t count );

/// Sum of products: ascending minterms, each a left-deep AND chain
/// M(a, b, 0), ORed left-deep with M(a, b, 1), then Λ-cleaned. Constants
/// and single literals are returned as direct output signals.
MigGraph sop_decompose( const TruthTable& table );

Dataset enumerate_sop3();
/// `sample_count` distinct 4-input tables. Throws std::invalid_argument above 65536.
Dataset enumerate_sop4( std::size_t sample_count = 10000, std::uint64_t seed = 0 );

/// Minimum gate count of any MIG over {0, x1, x2, x3} computing `table`
/// (low 8 bits, row r = inputs as the bits of r with x1 first).
std::uint32_t optimal_size_3( std::uint8_t table );
const std::array<std::uint8_t, 256>& optimal_size_3_table();

void save_optimal_size_3_table( const std::filesystem::path& path );
/// Reads a table written by save_optimal_size_3_table.
std::array<std::uint8_t, 256> load_optimal_size_3_table( const std::filesystem::path& path );

} // namespace migopt
