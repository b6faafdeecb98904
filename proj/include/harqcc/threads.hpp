#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace harqcc {

// Worker-count policy shared by the sweep and simulation code paths.
// requested <= 0 means "use all cores". The HARQ_EC_THREADS environment
// variable, when set to a positive integer, caps the result.
inline int resolve_threads(int requested) {
  long n = requested > 0
               ? requested
               : static_cast<long>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* cap = std::getenv("HARQ_EC_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) n = std::min(n, v);
  }
  return static_cast<int>(std::max(1L, n));
}

}  // namespace harqcc
