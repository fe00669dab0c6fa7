#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "migopt/io.hpp"

namespace migopt::detail
{

struct Line
{
  std::size_t number = 0;
  std::string_view text;
};

inline std::vector<Line> split_lines( std::string_view text )
{
  std::vector<Line> lines;
  std::size_t number = 1;
  while ( !text.empty() )
  {
    const auto nl = text.find( '\n' );
    auto l = text.substr( 0, nl );
    if ( !l.empty() && l.back() == '\r' )
    {
      l.remove_suffix( 1 );
    }
    lines.push_back( { number++, l } );
    if ( nl == std::string_view::npos )
    {
      break;
    }
    text.remove_prefix( nl + 1 );
  }
  return lines;
}

inline std::string_view trim( std::string_view s )
{
  while ( !s.empty() && ( s.front() == ' ' || s.front() == '\t' ) )
    s.remove_prefix( 1 );
  while ( !s.empty() && ( s.back() == ' ' || s.back() == '\t' ) )
    s.remove_suffix( 1 );
  return s;
}

/// Single-line scanner that reports positions as ParseError.
class TextCursor
{
public:
  TextCursor( std::string_view text, std::size_t line ) : text_{ text }, line_{ line } {}

  std::size_t column() const { return pos_ + 1; }
  bool at_end() const { return pos_ >= text_.size(); }
  std::string_view rest() const { return text_.substr( pos_ ); }

  [[noreturn]] void fail( const std::string& cause ) const { throw ParseError( line_, column(), cause ); }

  void skip_spaces()
  {
    while ( !at_end() && ( text_[pos_] == ' ' || text_[pos_] == '\t' ) )
      ++pos_;
  }

  bool accept( char c )
  {
    if ( !at_end() && text_[pos_] == c )
    {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect( char c )
  {
    if ( !accept( c ) )
    {
      fail( std::string( "expected '" ) + c + "'" );
    }
  }

  bool accept_word( std::string_view w )
  {
    if ( rest().substr( 0, w.size() ) == w )
    {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  void expect_word( std::string_view w )
  {
    if ( !accept_word( w ) )
    {
      fail( "expected `" + std::string( w ) + "`" );
    }
  }

  std::uint64_t read_uint( const char* what )
  {
    skip_spaces();
    std::uint64_t v = 0;
    const auto* first = text_.data() + pos_;
    const auto* last = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars( first, last, v );
    if ( ec == std::errc::result_out_of_range )
    {
      fail( std::string( what ) + " out of range" );
    }
    if ( ec != std::errc{} )
    {
      fail( std::string( "expected " ) + what );
    }
    pos_ += static_cast<std::size_t>( ptr - first );
    return v;
  }

  /// Next whitespace-delimited token.
  std::string_view read_token( const char* what )
  {
    skip_spaces();
    const auto start = pos_;
    while ( !at_end() && text_[pos_] != ' ' && text_[pos_] != '\t' )
      ++pos_;
    if ( start == pos_ )
    {
      fail( std::string( "expected " ) + what );
    }
    return text_.substr( start, pos_ - start );
  }

  void expect_end()
  {
    skip_spaces();
    if ( !at_end() )
    {
      fail( "unexpected trailing text `" + std::string( rest() ) + "`" );
    }
  }

private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

} // namespace migopt::detail
