#include "opkernel/norm_estimate.hpp"

#include <algorithm>
#include <vector>

namespace opkernel {

namespace {

struct Candidate {
  Real value;
  CVector x;
};

RVector expanded_weights(const BochnerSpace& space) {
  RVector w(space.dim() * space.points());
  for (Eigen::Index t = 0; t < space.points(); ++t)
    w.segment(t * space.dim(), space.dim()).setConstant(space.measure.weight(t));
  return w;
}

}  // namespace

ColumnSearch column_search(const CMatrix& columns, const BochnerSpace& codomain,
                           const NormedSpace& source, Real r, const SearchBudget& budget,
                           Rng& rng) {
  const Eigen::Index dim = source.dim();
  if (columns.cols() != dim || columns.rows() != codomain.dim() * codomain.points())
    throw Error("column_search: shape mismatch");

  const auto evaluate = [&](const CVector& x) {
    const CVector flat = columns * x;
    return lp_norm(codomain.measure.weights(), codomain.target,
                   detail::as_samples(flat, codomain.dim(), codomain.points()), r) /
           source.norm(x);
  };
  const auto basis = [&](Eigen::Index j) {
    CVector e = CVector::Unit(dim, j);
    return CVector(e / source.norm(e));
  };

  if (dim == 1 || source.p() == 1.0) {
    ColumnSearch out{-1.0, {}, true};
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Real v = evaluate(basis(j));
      if (v > out.value) {
        out.value = v;
        out.direction = basis(j);
      }
    }
    return out;
  }

  std::vector<Candidate> pool;
  pool.reserve(static_cast<std::size_t>(dim + budget.sphere_samples));
  for (Eigen::Index j = 0; j < dim; ++j) pool.push_back({evaluate(basis(j)), basis(j)});
  std::uniform_real_distribution<Real> angle(0.0, 2.0 * 3.14159265358979323846);
  for (int i = 0; i < budget.sphere_samples; ++i) {
    CVector x;
    if (exponent::is_inf(source.p()) && i % 2 == 1) {
      // extreme points of the l_inf ball: unimodular coordinates
      x.resize(dim);
      for (Eigen::Index k = 0; k < dim; ++k) x(k) = std::polar(1.0 / source.weights()(k), angle(rng));
    } else {
      x = random_unit_vector(source, rng);
    }
    pool.push_back({evaluate(x), std::move(x)});
  }

  const std::size_t keep = std::min<std::size_t>(4, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  const RVector wflat = expanded_weights(codomain);
  const NormedSpace source_dual = source.dual();
  ColumnSearch out{pool.front().value, pool.front().x, false};
  for (std::size_t c = 0; c < keep; ++c) {
    CVector x = pool[c].x;
    Real previous = pool[c].value;
    for (int it = 0; it < budget.iterations; ++it) {
      const CVector flat = columns * x;
      const auto g = detail::as_samples(flat, codomain.dim(), codomain.points());
      if (g.cwiseAbs().maxCoeff() == 0.0) break;
      const Samples h = lp_duality_map(codomain.measure.weights(), codomain.target, g, r);
      const CVector hflat = Eigen::Map<const CVector>(h.data(), h.size());
      const CVector z = columns.adjoint() * wflat.cwiseProduct(hflat);
      if (z.cwiseAbs().maxCoeff() == 0.0) break;
      x = source_dual.duality_map(z);
      x /= source.norm(x);
      const Real v = evaluate(x);
      if (v > out.value) {
        out.value = v;
        out.direction = x;
      }
      if (v - previous <= budget.tolerance * v) break;
      previous = v;
    }
  }
  return out;
}

}  // namespace opkernel
