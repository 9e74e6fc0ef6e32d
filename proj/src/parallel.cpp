#include "slrr/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace slrr {

int thread_cap() {
  static const int cap = [] {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("SLRR_THREADS")) {
      try {
        const int req = std::stoi(env);
        if (req >= 1) n = std::min(n, req);
      } catch (...) {
        // unparsable value: ignore the cap
      }
    }
    return std::max(n, 1);
  }();
  return cap;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace slrr
