#include "opkernel/schur.hpp"

#include <cmath>

namespace opkernel {

ConstantEstimate schur_c1(const OperatorKernel& k, Real theta, const SearchBudget& budget,
                          std::uint64_t seed) {
  if (!(theta >= 1.0) || exponent::is_inf(theta)) throw Error("theta must lie in [1, inf)");
  const Eigen::Index dx = k.source().dim();
  const auto& wt = k.codomain_space().weights();

  ConstantEstimate out{0.0, 0.0, true};
  for (Eigen::Index s = 0; s < k.domain_space().size(); ++s) {
    Rng rng = make_rng(seed, 0xC1u + static_cast<std::uint64_t>(s));
    const ColumnSearch col =
        column_search(k.blocks().middleCols(s * dx, dx), k.codomain(), k.source(), theta, budget, rng);
    out.lower = std::max(out.lower, col.value);
    out.exact = out.exact && col.exact;

    Real acc = 0.0;
    for (Eigen::Index t = 0; t < k.codomain_space().size(); ++t)
      acc += wt(t) * std::pow(operator_norm(k.entry(t, s), k.source(), k.target()).value, theta);
    out.upper = std::max(out.upper, std::pow(acc, 1.0 / theta));
  }
  if (out.exact) out.upper = out.lower;
  return out;
}

ConstantEstimate schur_c2(const OperatorKernel& k, Real theta, const SearchBudget& budget,
                          std::uint64_t seed) {
  return schur_c1(adjoint_kernel(k), theta, budget, derive_seed(seed, 0xC2u));
}

SchurConstants schur_constants(const OperatorKernel& k, Real theta, const SearchBudget& budget,
                               std::uint64_t seed) {
  return {schur_c1(k, theta, budget, seed), schur_c2(k, theta, budget, seed), 1.0, theta};
}

Real theorem27_bound(Real c1, Real c2, Real tau, const ExponentTriple& e) {
  const Real a = e.theta_over_p();
  return std::pow(c1, a) * std::pow(tau * c2, 1.0 - a);
}

Real theorem27_bound(const SchurConstants& c, const ExponentTriple& e) {
  return theorem27_bound(c.c1.upper, c.c2.upper, c.tau, e);
}

NormEstimate exact_norm_q1(const OperatorKernel& k, Real p, const SearchBudget& budget,
                           std::uint64_t seed) {
  exponent::require_valid(p, "p");
  return detail::extreme_point_search(k, p, budget, seed);
}

Real slack_ratio(Real lower, Real bound) {
  if (lower == 0.0) return 0.0;
  return bound == 0.0 ? kInf : lower / bound;
}

SchurReport verify_schur_bound(const OperatorKernel& k, Real theta, Real q,
                               const SearchBudget& budget, std::uint64_t seed, Real tolerance) {
  SchurReport r;
  r.exponents = make_exponents(q, theta);
  r.constants = schur_constants(k, theta, budget, seed);
  r.bound = theorem27_bound(r.constants, r.exponents);
  r.lower = norm_lower_bound(k, r.exponents.q, r.exponents.p, budget, derive_seed(seed, 0x90u));
  r.ratio = slack_ratio(r.lower.value, r.bound);
  r.certified = r.constants.c1.exact && r.constants.c2.exact;
  r.violation = r.ratio > 1.0 + tolerance;
  return r;
}

}  // namespace opkernel
