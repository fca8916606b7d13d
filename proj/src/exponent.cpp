#include "opkernel/exponent.hpp"

namespace opkernel {

ExponentTriple make_exponents(Real q, Real theta) {
  if (!(theta >= 1.0) || exponent::is_inf(theta))
    throw Error("theta must lie in [1, inf)");
  exponent::require_valid(q, "q");
  const Real theta_conj = exponent::conjugate(theta);
  const bool endpoint_ok = theta == 1.0 && exponent::is_inf(q);
  if (!(q < theta_conj) && !endpoint_ok)
    throw Error("outside admissible region: need 1 <= q < theta/(theta-1)");
  const Real inv_p = exponent::reciprocal(q) - 1.0 + 1.0 / theta;
  // inv_p > 0 strictly inside the region; clamp the rounding residue at theta = 1.
  const Real p = theta == 1.0 ? q : exponent::from_reciprocal(std::max(inv_p, 0.0));
  return {q, p, theta};
}

}  // namespace opkernel
