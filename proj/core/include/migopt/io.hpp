#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "migopt/mig_graph.hpp"
#include "migopt/policy.hpp"

namespace migopt
{

/// Malformed input; `line` and `column` are 1-based, 0 when unknown.
class ParseError : public std::runtime_error
{
public:
  ParseError( std::size_t line, std::size_t column, const std::string& cause );

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& cause() const { return cause_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string cause_;
};

/*! \brief Native MIG text.
 *
 *     mig <pi_count> <po_count> <maj_count>
 *     n<id> = M(<sig>,<sig>,<sig>)
 *     po<k> = <sig>
 *
 * where <sig> is an optional `!` followed by `x<j>` (1-based input),
 * `n<id>` or `0`. Emission numbers the reachable nodes densely in
 * topological order, so emit(parse(t)) is a normal form.
 */
std::string emit_mig( const MigGraph& g );
MigGraph parse_mig( std::string_view text );

/// ASCII AIGER without latches; every AND becomes M(a, b, 0).
MigGraph parse_aiger_ascii( std::string_view text );

std::string read_file( const std::filesystem::path& path );
void write_file( const std::filesystem::path& path, std::string_view contents );

MigGraph load_mig( const std::filesystem::path& path );
void save_mig( const std::filesystem::path& path, const MigGraph& g );
/// Dispatches on extension: `.aag` through parse_aiger_ascii, anything else as MIG text.
MigGraph load_graph( const std::filesystem::path& path );

struct Checkpoint
{
  PolicyParams params;
  std::optional<std::string> rng_state;
};

/// Versioned text; weights in shortest round-trip decimal; FNV-1a trailer.
std::string emit_checkpoint( const Checkpoint& ckpt );
Checkpoint parse_checkpoint( std::string_view text );
void save_checkpoint( const std::filesystem::path& path, const Checkpoint& ckpt );
Checkpoint load_checkpoint( const std::filesystem::path& path );

std::uint64_t fnv1a64( std::string_view bytes );

/// A named collection of graphs with the spec that generated it.
struct Dataset
{
  std::string kind;
  std::uint64_t seed = 0;
  std::map<std::string, std::int64_t> parameters;
  std::vector<std::string> names;
  std::vector<MigGraph> graphs;

  std::size_t size() const { return graphs.size(); }
};

/// Writes `<dir>/<name>.mig` per item plus `<dir>/dataset.manifest` (JSON).
void save_dataset( const std::filesystem::path& dir, const Dataset& dataset );
Dataset load_dataset( const std::filesystem::path& dir );

} // namespace migopt
