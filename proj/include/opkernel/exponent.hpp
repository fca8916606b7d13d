#pragma once

#include <cmath>

#include "opkernel/types.hpp"

// Extended-real exponent arithmetic. Every place that needs 1/p, p' or
// x^(1/p) goes through here so that the conventions 1/inf = 0 and
// x^(1/inf) = 1 live in exactly one spot.
namespace opkernel::exponent {

inline bool is_inf(Real p) { return std::isinf(p); }

inline Real reciprocal(Real p) { return is_inf(p) ? 0.0 : 1.0 / p; }

inline Real from_reciprocal(Real r) { return r == 0.0 ? kInf : 1.0 / r; }

/// Hölder conjugate: 1/p + 1/p' = 1, with 1' = inf and inf' = 1.
inline Real conjugate(Real p) { return from_reciprocal(1.0 - reciprocal(p)); }

/// x^(1/p); returns 1 for p = inf.
inline Real root(Real x, Real p) { return is_inf(p) ? 1.0 : std::pow(x, 1.0 / p); }

inline bool valid(Real p) { return p >= 1.0 && !std::isnan(p); }

inline void require_valid(Real p, const char* what) {
  if (!valid(p)) throw Error(std::string(what) + " must lie in [1, inf]");
}

}  // namespace opkernel::exponent

namespace opkernel {

/// (q, p, theta) linked by 1/q - 1/p = 1 - 1/theta.
struct ExponentTriple {
  Real q     = 1.0;
  Real p     = 1.0;
  Real theta = 1.0;

  Real theta_over_p() const { return theta * exponent::reciprocal(p); }
  bool operator==(const ExponentTriple&) const = default;
};

/// Solves for p given q and theta. Requires theta in [1, inf) and
/// 1 <= q < theta' (q = inf is accepted only for theta = 1, giving p = inf).
ExponentTriple make_exponents(Real q, Real theta);

}  // namespace opkernel
