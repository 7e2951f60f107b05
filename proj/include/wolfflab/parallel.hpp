#pragma once

#include <cstddef>
#include <functional>

namespace wolff {

// Runs body(0), ..., body(count-1) on a small thread pool.  Work items must
// be independent; results must not depend on scheduling.  Thread count comes
// from the hardware, capped by the WOLFFLAB_THREADS environment variable.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace wolff
