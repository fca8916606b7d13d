#pragma once

#include <cstdint>
#include <optional>

#include "opkernel/measure_space.hpp"
#include "opkernel/normed_space.hpp"
#include "opkernel/random.hpp"

namespace opkernel {

/// L_p(S, X) as a pair (S, X).
struct BochnerSpace {
  DiscreteMeasureSpace measure;
  NormedSpace target;

  Eigen::Index points() const { return measure.size(); }
  Eigen::Index dim() const { return target.dim(); }
  BochnerSpace dual() const { return {measure, target.dual()}; }
};

/// An X-valued function on a finite measure space.
class BochnerFunction {
 public:
  BochnerFunction(BochnerSpace space, Samples values);
  static BochnerFunction zero(BochnerSpace space);

  const BochnerSpace& space() const { return space_; }
  const DiscreteMeasureSpace& measure() const { return space_.measure; }
  const NormedSpace& target() const { return space_.target; }
  const Samples& values() const { return values_; }
  auto value(Eigen::Index s) const { return values_.col(s); }

  /// (sum_s w_s ||f(s)||^p)^(1/p), or max_s ||f(s)|| for p = inf.
  Real lp_norm(Real p) const;

  /// Support size (points carrying a nonzero vector).
  Eigen::Index support_size() const;

  BochnerFunction scaled(Complex factor) const { return {space_, values_ * factor}; }

 private:
  BochnerSpace space_;
  Samples values_;
};

Real lp_norm(const BochnerFunction& f, Real p);

/// Raw form used by the iterative estimators.
Real lp_norm(const RVector& weights, const NormedSpace& target, const Samples& values, Real p);

/// <g, f> = sum_s w_s g(s)^H f(s) for g in L_p'(S, X*) and f in L_p(S, X).
Complex pairing(const RVector& weights, const Samples& g, const Samples& f);

/// Unit norming functional of f in L_p(S, X): g in L_p'(S, X*) with
/// ||g||_p' = 1 and <g, f> = ||f||_p. Built from the pointwise duality map
/// and the signed-power rule g(s) = (||f(s)|| / ||f||_p)^(p-1) J(f(s)).
/// p = inf concentrates on the first maximizing point.
/// Throws Error("no norming functional selected") for f = 0.
Samples lp_duality_map(const RVector& weights, const NormedSpace& target, const Samples& values,
                       Real p);

BochnerFunction lp_duality_map(const BochnerFunction& f, Real p);

/// Element of the simple-function class: exactly `sparsity` points (chosen
/// uniformly) carry unit-sphere vectors of the target. When `normalize_to`
/// is set the result has unit L_q norm for that q.
BochnerFunction random_simple_function(const BochnerSpace& space, Eigen::Index sparsity,
                                       std::uint64_t seed,
                                       std::optional<Real> normalize_to = std::nullopt);

/// Uniformly random direction on the unit sphere of `space`.
CVector random_unit_vector(const NormedSpace& space, Rng& rng);

}  // namespace opkernel
