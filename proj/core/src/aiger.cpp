#include <unordered_map>

#include "migopt/io.hpp"
#include "text_cursor.hpp"

namespace migopt
{

namespace
{

struct AndLine
{
  std::size_t line = 0;
  std::uint64_t rhs0 = 0;
  std::uint64_t rhs1 = 0;
  std::size_t column = 0;
};

} // namespace

MigGraph parse_aiger_ascii( std::string_view text )
{
  const auto lines = detail::split_lines( text );
  if ( lines.empty() )
  {
    throw ParseError( 1, 1, "empty input" );
  }
  detail::TextCursor hc( lines[0].text, 1 );
  hc.expect_word( "aag" );
  if ( !hc.at_end() && hc.rest().front() != ' ' )
  {
    hc.fail( "expected `aag` header (binary AIGER is not supported)" );
  }
  const auto max_var = hc.read_uint( "M" );
  const auto num_inputs = hc.read_uint( "I" );
  const auto num_latches = hc.read_uint( "L" );
  const auto num_outputs = hc.read_uint( "O" );
  const auto num_ands = hc.read_uint( "A" );
  hc.expect_end();
  if ( num_latches != 0 )
  {
    throw ParseError( 1, 1, "latches are not supported" );
  }
  if ( num_inputs + num_ands > max_var )
  {
    throw ParseError( 1, 1, "M is smaller than I + L + A" );
  }
  if ( 1 + num_inputs + num_outputs + num_ands > lines.size() )
  {
    throw ParseError( lines.size(), 1, "file ends before all inputs, outputs and AND gates are listed" );
  }

  const auto max_literal = 2 * max_var + 1;
  std::size_t row = 1;
  auto read_literal = [&]( detail::TextCursor& c ) {
    c.skip_spaces();
    const auto col = c.column();
    const auto lit = c.read_uint( "literal" );
    if ( lit > max_literal )
    {
      throw ParseError( lines[row].number, col, "literal " + std::to_string( lit ) + " exceeds 2M+1" );
    }
    return std::pair{ lit, col };
  };

  // variable -> 1-based input position, or AND line
  std::unordered_map<std::uint64_t, std::uint32_t> input_of;
  std::unordered_map<std::uint64_t, AndLine> and_of;
  for ( std::uint64_t i = 0; i < num_inputs; ++i, ++row )
  {
    detail::TextCursor c( lines[row].text, lines[row].number );
    const auto [lit, col] = read_literal( c );
    c.expect_end();
    if ( lit < 2 || ( lit & 1 ) )
    {
      throw ParseError( lines[row].number, col, "input literal must be even and non-constant" );
    }
    if ( !input_of.emplace( lit >> 1, static_cast<std::uint32_t>( i ) ).second )
    {
      throw ParseError( lines[row].number, col, "variable defined twice" );
    }
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> outputs;
  std::vector<std::size_t> output_rows;
  for ( std::uint64_t i = 0; i < num_outputs; ++i, ++row )
  {
    detail::TextCursor c( lines[row].text, lines[row].number );
    const auto lc = read_literal( c );
    c.expect_end();
    outputs.push_back( lc );
    output_rows.push_back( row );
  }
  for ( std::uint64_t i = 0; i < num_ands; ++i, ++row )
  {
    detail::TextCursor c( lines[row].text, lines[row].number );
    const auto [lhs, col] = read_literal( c );
    AndLine a;
    a.line = lines[row].number;
    std::tie( a.rhs0, a.column ) = read_literal( c );
    a.rhs1 = read_literal( c ).first;
    c.expect_end();
    if ( lhs < 2 || ( lhs & 1 ) )
    {
      throw ParseError( a.line, col, "AND output literal must be even and non-constant" );
    }
    if ( input_of.count( lhs >> 1 ) || !and_of.emplace( lhs >> 1, a ).second )
    {
      throw ParseError( a.line, col, "variable defined twice" );
    }
  }
  // whatever follows (symbol table, comments) is ignored

  MigGraph g( static_cast<std::uint32_t>( num_inputs ) );
  std::unordered_map<std::uint64_t, Signal> built;
  std::unordered_map<std::uint64_t, bool> open;
  auto resolved = [&]( std::uint64_t lit, std::size_t line, std::size_t col ) -> std::optional<Signal> {
    const auto var = lit >> 1;
    const bool neg = lit & 1;
    if ( var == 0 )
    {
      return g.constant( neg );
    }
    if ( auto it = input_of.find( var ); it != input_of.end() )
    {
      return g.pi( it->second ) ^ neg;
    }
    if ( auto it = built.find( var ); it != built.end() )
    {
      return it->second ^ neg;
    }
    if ( !and_of.count( var ) )
    {
      throw ParseError( line, col, "literal " + std::to_string( lit ) + " refers to an undefined variable" );
    }
    return std::nullopt;
  };
  auto build = [&]( std::uint64_t root ) {
    std::vector<std::uint64_t> stack{ root };
    while ( !stack.empty() )
    {
      const auto var = stack.back();
      if ( built.count( var ) )
      {
        stack.pop_back();
        continue;
      }
      const auto& a = and_of.at( var );
      open[var] = true;
      const auto s0 = resolved( a.rhs0, a.line, a.column );
      const auto s1 = resolved( a.rhs1, a.line, a.column );
      if ( s0 && s1 )
      {
        built.emplace( var, g.add_majority( *s0, *s1, g.constant( false ) ) );
        open[var] = false;
        stack.pop_back();
        continue;
      }
      for ( const auto lit : { a.rhs0, a.rhs1 } )
      {
        const auto v = lit >> 1;
        if ( and_of.count( v ) && !built.count( v ) )
        {
          if ( open[v] )
          {
            throw ParseError( a.line, a.column, "combinational cycle through variable " + std::to_string( v ) );
          }
          stack.push_back( v );
        }
      }
    }
  };
  for ( std::size_t i = 0; i < outputs.size(); ++i )
  {
    const auto [lit, col] = outputs[i];
    const auto line = lines[output_rows[i]].number;
    if ( !resolved( lit, line, col ) )
    {
      build( lit >> 1 );
    }
    g.add_output( *resolved( lit, line, col ) );
  }
  return g;
}

} // namespace migopt
