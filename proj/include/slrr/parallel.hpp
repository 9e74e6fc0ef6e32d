#pragma once

#include <cstdint>

namespace slrr {

/// Number of OpenMP threads to use, honoring the SLRR_THREADS env var cap.
int thread_cap();

/// Deterministic seed derivation (splitmix64 mix of base and stream index).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace slrr
