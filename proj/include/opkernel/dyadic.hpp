#pragma once

#include <cmath>

#include "opkernel/types.hpp"

// Smooth dyadic profile: psi(s) = b(s) / sum_j b(2^-j s) with
// b(s) = rho(s - 1/2) rho(2 - s) and rho(x) = exp(-1/x) for x > 0.
// psi is supported in [1/2, 2] and sum_k psi(2^-k s) = 1 for s > 0.
namespace opkernel::dyadic {

inline Real rho(Real x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

inline Real bump(Real s) { return rho(s - 0.5) * rho(2.0 - s); }

inline Real psi(Real s) {
  const Real b = bump(s);
  if (b == 0.0) return 0.0;
  // only j in {-1, 0, 1} can be active inside (1/2, 2)
  return b / (bump(0.5 * s) + b + bump(2.0 * s));
}

/// Block k of the partition truncated at k_max, as a function of r = |t|:
///   phi_0(r) = 1 - sum_{k >= 1} psi(2^-k r),
///   phi_k(r) = psi(2^-k r) for 0 < k < k_max,
///   phi_kmax(r) = sum_{k >= k_max} psi(2^-k r).
inline Real phi(int k, Real r, int k_max) {
  if (k < 0 || k > k_max) return 0.0;
  if (k == 0) return r <= 1.0 ? 1.0 : psi(r);
  const Real s = std::ldexp(r, -k);
  if (k < k_max) return psi(s);
  return s >= 1.0 ? 1.0 : psi(s);
}

}  // namespace opkernel::dyadic
