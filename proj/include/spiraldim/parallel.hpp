#pragma once
#include <cstddef>
#include <functional>

namespace spiraldim {

// Number of workers used when a caller passes workers <= 0.
int default_workers();

// Runs fn(i) for i in [0, n). All fn invocations must be independent;
// the first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace spiraldim
