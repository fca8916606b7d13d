#pragma once

#include <cstdint>
#include <random>

#include "opkernel/types.hpp"

namespace opkernel {

using Rng = std::mt19937_64;

/// SplitMix64 mix of (seed, stream); gives independent, reproducible
/// generators for restarts and samples regardless of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(derive_seed(seed, stream));
}

/// i.i.d. standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
CMatrix complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace opkernel
