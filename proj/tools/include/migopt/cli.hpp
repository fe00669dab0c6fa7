#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "migopt/rewrite.hpp"

namespace migopt::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
/// Signatures agree but the inputs are too many for an exhaustive proof.
inline constexpr int kExitUnproven = 2;

/// Knobs that are not reachable from the command line.
struct Context
{
  EngineOptions engine;
  std::ostream* out = nullptr; ///< defaults to std::cout
  std::ostream* err = nullptr; ///< defaults to std::cerr
};

/// Runs one command; `args` excludes the program name.
int run( const std::vector<std::string>& args, const Context& ctx = {} );

} // namespace migopt::cli
