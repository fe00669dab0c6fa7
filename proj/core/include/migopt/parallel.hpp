#pragma once

#include <cstddef>
#include <functional>

namespace migopt
{

/// Worker count: MIGOPT_THREADS if set and positive, else the hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for every i in [0, count). Work is split into contiguous
/// blocks, so results written by index are independent of the thread count.
/// The first exception (lowest index) is rethrown after all workers finish.
void parallel_for( std::size_t count, const std::function<void( std::size_t )>& body,
                   std::size_t workers = worker_count() );

} // namespace migopt
