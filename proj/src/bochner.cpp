#include "opkernel/bochner.hpp"

#include <algorithm>
#include <numeric>

namespace opkernel {

BochnerFunction::BochnerFunction(BochnerSpace space, Samples values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.cols() != space_.points())
    throw Error("Bochner function: value count must equal point count");
  if (values_.rows() != space_.dim())
    throw Error("Bochner function: value dimension must equal target dimension");
}

BochnerFunction BochnerFunction::zero(BochnerSpace space) {
  Samples v = Samples::Zero(space.dim(), space.points());
  return {std::move(space), std::move(v)};
}

Real BochnerFunction::lp_norm(Real p) const {
  return opkernel::lp_norm(space_.measure.weights(), space_.target, values_, p);
}

Eigen::Index BochnerFunction::support_size() const {
  Eigen::Index n = 0;
  for (Eigen::Index s = 0; s < values_.cols(); ++s)
    if (values_.col(s).cwiseAbs().maxCoeff() > 0.0) ++n;
  return n;
}

Real lp_norm(const BochnerFunction& f, Real p) { return f.lp_norm(p); }

Real lp_norm(const RVector& weights, const NormedSpace& target, const Samples& values, Real p) {
  exponent::require_valid(p, "p");
  const RVector pointwise = target.column_norms(values);
  const Real peak = pointwise.size() ? pointwise.maxCoeff() : 0.0;
  if (peak == 0.0) return 0.0;
  if (exponent::is_inf(p)) return peak;
  if (p == 1.0) return weights.dot(pointwise);
  Real acc = 0.0;
  for (Eigen::Index s = 0; s < pointwise.size(); ++s)
    acc += weights(s) * std::pow(pointwise(s) / peak, p);
  return peak * std::pow(acc, 1.0 / p);
}

Complex pairing(const RVector& weights, const Samples& g, const Samples& f) {
  Complex acc = 0.0;
  for (Eigen::Index s = 0; s < f.cols(); ++s) acc += weights(s) * g.col(s).dot(f.col(s));
  return acc;
}

Samples lp_duality_map(const RVector& weights, const NormedSpace& target, const Samples& values,
                       Real p) {
  exponent::require_valid(p, "p");
  const RVector pointwise = target.column_norms(values);
  const Real total = lp_norm(weights, target, values, p);
  if (total == 0.0) throw Error("no norming functional selected");

  Samples out = Samples::Zero(values.rows(), values.cols());
  if (exponent::is_inf(p)) {
    Eigen::Index best = 0;
    Real best_val = -1.0;
    for (Eigen::Index s = 0; s < pointwise.size(); ++s)
      if (pointwise(s) > best_val) {
        best_val = pointwise(s);
        best = s;
      }
    out.col(best) = target.duality_map(values.col(best)) / weights(best);
    return out;
  }
  for (Eigen::Index s = 0; s < values.cols(); ++s) {
    if (pointwise(s) == 0.0) continue;
    const Real scale = p == 1.0 ? 1.0 : std::pow(pointwise(s) / total, p - 1.0);
    out.col(s) = scale * target.duality_map(values.col(s));
  }
  return out;
}

BochnerFunction lp_duality_map(const BochnerFunction& f, Real p) {
  return {f.space().dual(), lp_duality_map(f.measure().weights(), f.target(), f.values(), p)};
}

CVector random_unit_vector(const NormedSpace& space, Rng& rng) {
  for (;;) {
    CVector v = complex_gaussian(rng, space.dim(), 1);
    const Real n = space.norm(v);
    if (n > 0.0) return v / n;
  }
}

BochnerFunction random_simple_function(const BochnerSpace& space, Eigen::Index sparsity,
                                       std::uint64_t seed, std::optional<Real> normalize_to) {
  if (sparsity < 1 || sparsity > space.points())
    throw Error("sparsity must lie in [1, point count]");
  Rng rng = make_rng(seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(space.points()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < sparsity; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, space.points() - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  Samples values = Samples::Zero(space.dim(), space.points());
  for (Eigen::Index i = 0; i < sparsity; ++i)
    values.col(order[static_cast<std::size_t>(i)]) = random_unit_vector(space.target, rng);
  BochnerFunction f(space, std::move(values));
  if (normalize_to) return f.scaled(1.0 / f.lp_norm(*normalize_to));
  return f;
}

}  // namespace opkernel
