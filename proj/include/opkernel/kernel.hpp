#pragma once

#include <functional>

#include "opkernel/bochner.hpp"

namespace opkernel {

/// Matrix-valued kernel k(t, s) : X -> Y over T x S, stored as one dense
/// block matrix with block (t, s) = k(t, s) of shape dim Y x dim X.
class OperatorKernel {
 public:
  OperatorKernel(DiscreteMeasureSpace domain, DiscreteMeasureSpace codomain, NormedSpace source,
                 NormedSpace target, CMatrix blocks);

  /// Builds the block matrix from entry(t, s).
  static OperatorKernel from_function(DiscreteMeasureSpace domain, DiscreteMeasureSpace codomain,
                                      NormedSpace source, NormedSpace target,
                                      const std::function<CMatrix(Eigen::Index, Eigen::Index)>& entry);

  static OperatorKernel zero(DiscreteMeasureSpace domain, DiscreteMeasureSpace codomain,
                             NormedSpace source, NormedSpace target);

  /// k(t, s) = g((t - s) mod N) on Z_N with counting measure, scalar spaces.
  static OperatorKernel circulant(const CVector& g);

  const DiscreteMeasureSpace& domain_space() const { return domain_.measure; }
  const DiscreteMeasureSpace& codomain_space() const { return codomain_.measure; }
  const NormedSpace& source() const { return domain_.target; }
  const NormedSpace& target() const { return codomain_.target; }
  const CMatrix& blocks() const { return blocks_; }

  auto entry(Eigen::Index t, Eigen::Index s) const {
    return blocks_.block(t * target().dim(), s * source().dim(), target().dim(), source().dim());
  }

  // Operator interface shared with the torus operators.
  const BochnerSpace& domain() const { return domain_; }
  const BochnerSpace& codomain() const { return codomain_; }

  /// (Kf)(t) = sum_s w_s k(t, s) f(s).
  Samples apply(const Samples& f) const;
  /// (K*h)(s) = sum_t w_t k(t, s)^H h(t); the adjoint under the weighted pairings.
  Samples apply_adjoint(const Samples& h) const;

  /// sqrt(W_T) K sqrt(W_S) in the flat coordinates; its spectral norm is
  /// the L2 -> L2 norm when both spaces are unit-weight euclidean.
  CMatrix weighted_matrix() const;

 private:
  BochnerSpace domain_;
  BochnerSpace codomain_;
  CMatrix blocks_;
};

BochnerFunction apply_operator(const OperatorKernel& k, const BochnerFunction& f);

/// Complex Gaussian entries; point weights drawn from [0.5, 2] when
/// `random_weights` is set, counting measure otherwise.
OperatorKernel random_gaussian_kernel(Eigen::Index domain_points, Eigen::Index codomain_points,
                                      NormedSpace source, NormedSpace target, Rng& rng,
                                      bool random_weights = true);

/// Kernel of the adjoint: entries k(t, s)^H over S x T mapping Y* -> X*.
OperatorKernel adjoint_kernel(const OperatorKernel& k);

}  // namespace opkernel
