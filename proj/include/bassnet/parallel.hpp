#pragma once

#include <cstdint>

namespace bassnet {

// Worker count: `requested` if nonzero, else BASSNET_THREADS, else hardware concurrency.
[[nodiscard]] unsigned resolve_thread_count(unsigned requested = 0);

}  // namespace bassnet
