#include "opkernel/kernel.hpp"

namespace opkernel {

OperatorKernel::OperatorKernel(DiscreteMeasureSpace domain, DiscreteMeasureSpace codomain,
                               NormedSpace source, NormedSpace target, CMatrix blocks)
    : domain_{std::move(domain), std::move(source)},
      codomain_{std::move(codomain), std::move(target)},
      blocks_(std::move(blocks)) {
  if (blocks_.rows() != codomain_.points() * codomain_.dim() ||
      blocks_.cols() != domain_.points() * domain_.dim())
    throw Error("kernel entry grid must be |T| x |S| blocks of shape dim Y x dim X");
}

OperatorKernel OperatorKernel::from_function(
    DiscreteMeasureSpace domain, DiscreteMeasureSpace codomain, NormedSpace source,
    NormedSpace target, const std::function<CMatrix(Eigen::Index, Eigen::Index)>& entry) {
  const Eigen::Index dy = target.dim();
  const Eigen::Index dx = source.dim();
  CMatrix blocks(codomain.size() * dy, domain.size() * dx);
  for (Eigen::Index t = 0; t < codomain.size(); ++t)
    for (Eigen::Index s = 0; s < domain.size(); ++s) {
      const CMatrix e = entry(t, s);
      if (e.rows() != dy || e.cols() != dx) throw Error("kernel entry has the wrong shape");
      blocks.block(t * dy, s * dx, dy, dx) = e;
    }
  return {std::move(domain), std::move(codomain), std::move(source), std::move(target),
          std::move(blocks)};
}

OperatorKernel OperatorKernel::zero(DiscreteMeasureSpace domain, DiscreteMeasureSpace codomain,
                                    NormedSpace source, NormedSpace target) {
  CMatrix blocks = CMatrix::Zero(codomain.size() * target.dim(), domain.size() * source.dim());
  return {std::move(domain), std::move(codomain), std::move(source), std::move(target),
          std::move(blocks)};
}

OperatorKernel OperatorKernel::circulant(const CVector& g) {
  const Eigen::Index n = g.size();
  auto space = DiscreteMeasureSpace::counting(n);
  return from_function(space, space, NormedSpace::euclidean(1), NormedSpace::euclidean(1),
                       [&](Eigen::Index t, Eigen::Index s) {
                         return CMatrix::Constant(1, 1, g(((t - s) % n + n) % n));
                       });
}

Samples OperatorKernel::apply(const Samples& f) const {
  if (f.rows() != domain_.dim() || f.cols() != domain_.points())
    throw Error("apply: function does not live on the kernel's domain");
  Samples weighted = f * domain_.measure.weights().asDiagonal();
  const CVector out = blocks_ * Eigen::Map<const CVector>(weighted.data(), weighted.size());
  return Eigen::Map<const Samples>(out.data(), codomain_.dim(), codomain_.points());
}

Samples OperatorKernel::apply_adjoint(const Samples& h) const {
  if (h.rows() != codomain_.dim() || h.cols() != codomain_.points())
    throw Error("apply_adjoint: function does not live on the kernel's codomain");
  Samples weighted = h * codomain_.measure.weights().asDiagonal();
  const CVector out =
      blocks_.adjoint() * Eigen::Map<const CVector>(weighted.data(), weighted.size());
  return Eigen::Map<const Samples>(out.data(), domain_.dim(), domain_.points());
}

CMatrix OperatorKernel::weighted_matrix() const {
  const auto expand = [](const BochnerSpace& sp) {
    RVector w(sp.dim() * sp.points());
    for (Eigen::Index i = 0; i < sp.points(); ++i)
      w.segment(i * sp.dim(), sp.dim()).setConstant(std::sqrt(sp.measure.weight(i)));
    return w;
  };
  return expand(codomain_).asDiagonal() * blocks_ * expand(domain_).asDiagonal();
}

BochnerFunction apply_operator(const OperatorKernel& k, const BochnerFunction& f) {
  if (!(f.measure() == k.domain_space()) || !(f.target() == k.source()))
    throw Error("apply_operator: space/dimension mismatch");
  return {k.codomain(), k.apply(f.values())};
}

OperatorKernel random_gaussian_kernel(Eigen::Index domain_points, Eigen::Index codomain_points,
                                      NormedSpace source, NormedSpace target, Rng& rng,
                                      bool random_weights) {
  const auto weights = [&](Eigen::Index n) {
    if (!random_weights) return DiscreteMeasureSpace::counting(n);
    std::uniform_real_distribution<Real> w(0.5, 2.0);
    RVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = w(rng);
    return DiscreteMeasureSpace(std::move(v));
  };
  auto domain = weights(domain_points);
  auto codomain = weights(codomain_points);
  CMatrix blocks = complex_gaussian(rng, codomain_points * target.dim(), domain_points * source.dim());
  return {std::move(domain), std::move(codomain), std::move(source), std::move(target),
          std::move(blocks)};
}

OperatorKernel adjoint_kernel(const OperatorKernel& k) {
  return {k.codomain_space(), k.domain_space(), k.target().dual(), k.source().dual(),
          k.blocks().adjoint()};
}

}  // namespace opkernel
