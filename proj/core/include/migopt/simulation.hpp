#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "migopt/mig_graph.hpp"

namespace migopt
{

inline constexpr std::uint32_t kMaxTruthTableInputs = 16;

/*! \brief Complete truth table of a function of up to 16 inputs.
 *
 * Row `r` holds the value under the assignment PI_k = bit (k-1) of r, so
 * x1 is the least significant row bit. Bits beyond 2^input_count in the
 * last word are kept zero.
 */
class TruthTable
{
public:
  TruthTable() = default;
  explicit TruthTable( std::uint32_t input_count );

  /// Builds a table of up to 6 inputs from the low 2^input_count bits of `bits`.
  static TruthTable from_bits( std::uint32_t input_count, std::uint64_t bits );
  static TruthTable projection( std::uint32_t input_count, std::uint32_t index );

  std::uint32_t input_count() const { return input_count_; }
  std::uint64_t row_count() const { return std::uint64_t{ 1 } << input_count_; }
  bool bit( std::uint64_t row ) const { return ( words_[row >> 6] >> ( row & 63 ) ) & 1u; }
  void set_bit( std::uint64_t row, bool value );

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }
  /// Low 64 bits; the whole table for input_count <= 6.
  std::uint64_t low_bits() const { return words_.empty() ? 0 : words_[0]; }

  void mask_unused();
  TruthTable operator~() const;
  bool operator==( const TruthTable& ) const = default;

  std::string to_hex() const;

private:
  std::uint32_t input_count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Exact output functions. Throws std::invalid_argument when pi_count > 16.
std::vector<TruthTable> simulate_truth_tables( const MigGraph& g );

/*! \brief Bit-parallel simulation under seeded random PI patterns.
 *
 * `values[n]` is empty for nodes outside the outputs' fanin cone.
 */
struct SignatureSet
{
  std::uint32_t width = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint64_t>> values;
  std::vector<std::vector<std::uint64_t>> outputs;
};

/// PI patterns are drawn per PI, word by word, from mt19937_64(seed);
/// width is rounded up to a multiple of 64 and must be at least 64.
SignatureSet simulate_signatures( const MigGraph& g, std::uint64_t seed, std::uint32_t width );

/// The random PI pattern words used by simulate_signatures, per PI.
std::vector<std::vector<std::uint64_t>> signature_patterns( std::uint32_t pi_count, std::uint64_t seed, std::uint32_t width );

} // namespace migopt
