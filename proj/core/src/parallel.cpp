#include "migopt/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace migopt
{

std::size_t worker_count()
{
  if ( const char* env = std::getenv( "MIGOPT_THREADS" ) )
  {
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars( env, env + std::strlen( env ), n );
    if ( ec == std::errc{} && n > 0 )
    {
      return n;
    }
  }
  return std::max<std::size_t>( 1, std::thread::hardware_concurrency() );
}

void parallel_for( std::size_t count, const std::function<void( std::size_t )>& body, std::size_t workers )
{
  workers = std::max<std::size_t>( 1, std::min( workers, count ) );
  if ( workers <= 1 )
  {
    for ( std::size_t i = 0; i < count; ++i )
      body( i );
    return;
  }

  std::vector<std::exception_ptr> errors( workers );
  std::vector<std::thread> threads;
  threads.reserve( workers );
  for ( std::size_t w = 0; w < workers; ++w )
  {
    const auto begin = count * w / workers;
    const auto end = count * ( w + 1 ) / workers;
    threads.emplace_back( [&, w, begin, end] {
      try
      {
        for ( auto i = begin; i < end; ++i )
          body( i );
      }
      catch ( ... )
      {
        errors[w] = std::current_exception();
      }
    } );
  }
  for ( auto& t : threads )
    t.join();
  for ( const auto& e : errors )
  {
    if ( e )
      std::rethrow_exception( e );
  }
}

} // namespace migopt
