#include "bassnet/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace bassnet {

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BASSNET_THREADS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // Fall through to the hardware default on a malformed value.
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bassnet
