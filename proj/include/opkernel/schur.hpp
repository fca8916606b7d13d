#pragma once

#include <cstdint>

#include "opkernel/exponent.hpp"
#include "opkernel/kernel.hpp"
#include "opkernel/norm_estimate.hpp"

namespace opkernel {

/// A sup over a unit sphere, bracketed from both sides.
struct ConstantEstimate {
  Real lower = 0.0;  ///< attained by an explicit unit vector
  Real upper = 0.0;  ///< from pointwise operator norms; always sound
  bool exact = false;  ///< lower is the true value (then upper == lower)
};

struct SchurConstants {
  ConstantEstimate c1;
  ConstantEstimate c2;
  Real tau = 1.0;
  Real theta = 1.0;
};

/// C1 = sup_s sup_{||x|| = 1} (sum_t w_t ||k(t,s) x||_Y^theta)^(1/theta).
ConstantEstimate schur_c1(const OperatorKernel& k, Real theta, const SearchBudget& budget,
                          std::uint64_t seed);

/// C2 = sup_t sup_{||y*|| = 1} (sum_s w_s ||k(t,s)^H y*||_{X*}^theta)^(1/theta),
/// i.e. C1 of the adjoint kernel.
ConstantEstimate schur_c2(const OperatorKernel& k, Real theta, const SearchBudget& budget,
                          std::uint64_t seed);

SchurConstants schur_constants(const OperatorKernel& k, Real theta, const SearchBudget& budget,
                               std::uint64_t seed);

/// C1^(theta/p) (tau C2)^(1 - theta/p).
Real theorem27_bound(Real c1, Real c2, Real tau, const ExponentTriple& e);

/// The bound evaluated at the sound (upper) constants.
Real theorem27_bound(const SchurConstants& c, const ExponentTriple& e);

/// ||K||_{L_1 -> L_p}, attained on weighted deltas.
NormEstimate exact_norm_q1(const OperatorKernel& k, Real p, const SearchBudget& budget,
                           std::uint64_t seed);

struct SchurReport {
  ExponentTriple exponents;
  SchurConstants constants;
  Real bound = 0.0;
  NormEstimate lower;
  Real ratio = 0.0;  ///< lower / bound, 0 for the 0/0 case
  bool certified = false;  ///< both constants exact
  bool violation = false;
};

/// Computes p from (q, theta), both constants, the bound and an empirical
/// lower bound, and flags ratio > 1 + tolerance.
SchurReport verify_schur_bound(const OperatorKernel& k, Real theta, Real q,
                               const SearchBudget& budget, std::uint64_t seed,
                               Real tolerance = 1e-9);

/// Safe ratio with the 0/0 = 0 convention.
Real slack_ratio(Real lower, Real bound);

}  // namespace opkernel
