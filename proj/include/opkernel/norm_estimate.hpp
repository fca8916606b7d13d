#pragma once

#include <concepts>
#include <cstdint>

#include "opkernel/bochner.hpp"

namespace opkernel {

/// A bounded linear map L(S, X) -> L(T, Y) between discrete Bochner spaces.
/// `apply_adjoint` is the adjoint under the weighted pairings and maps
/// L(T, Y*) -> L(S, X*).
template <typename Op>
concept BochnerOperator = requires(const Op& op, const Samples& f) {
  { op.domain() } -> std::convertible_to<const BochnerSpace&>;
  { op.codomain() } -> std::convertible_to<const BochnerSpace&>;
  { op.apply(f) } -> std::convertible_to<Samples>;
  { op.apply_adjoint(f) } -> std::convertible_to<Samples>;
};

struct SearchBudget {
  int restarts = 20;
  int iterations = 50;
  int sphere_samples = 1000;
  /// Relative gain below which an ascent run is considered converged.
  Real tolerance = 1e-15;
};

/// Certified lower bound on an operator norm: value == ||K witness|| / ||witness||.
struct NormEstimate {
  Real value = 0.0;
  Samples witness;
  /// True when the search is provably the global maximum (scalar or
  /// l1-type sources at the q = 1 endpoint, l_inf-type targets at p = inf).
  bool exact = false;
};

/// sup over ||x||_X = 1 of ||A x||_{L_r(T, Y)} for a linear A : X -> L(T, Y).
/// Column j of `columns` holds A e_j flattened (dim Y x |T|, column major).
struct ColumnSearch {
  Real value = 0.0;
  CVector direction;
  bool exact = false;
};

ColumnSearch column_search(const CMatrix& columns, const BochnerSpace& codomain,
                           const NormedSpace& source, Real r, const SearchBudget& budget, Rng& rng);

namespace detail {

inline auto as_samples(const CVector& flat, Eigen::Index dim, Eigen::Index points) {
  return Eigen::Map<const Samples>(flat.data(), dim, points);
}

inline Samples delta(const BochnerSpace& space, Eigen::Index point, const CVector& direction) {
  Samples f = Samples::Zero(space.dim(), space.points());
  f.col(point) = direction / space.measure.weight(point);
  return f;
}

template <BochnerOperator Op>
CMatrix delta_columns(const Op& op, Eigen::Index point, bool adjoint) {
  const BochnerSpace& from = adjoint ? op.codomain() : op.domain();
  const BochnerSpace& to = adjoint ? op.domain() : op.codomain();
  CMatrix cols(to.dim() * to.points(), from.dim());
  for (Eigen::Index j = 0; j < from.dim(); ++j) {
    const Samples f = delta(from, point, CVector::Unit(from.dim(), j));
    const Samples g = adjoint ? op.apply_adjoint(f) : op.apply(f);
    cols.col(j) = Eigen::Map<const CVector>(g.data(), g.size());
  }
  return cols;
}

template <BochnerOperator Op>
Real ratio(const Op& op, const Samples& f, Real q, Real p) {
  const Real nf = lp_norm(op.domain().measure.weights(), op.domain().target, f, q);
  if (nf == 0.0) return 0.0;
  return lp_norm(op.codomain().measure.weights(), op.codomain().target, op.apply(f), p) / nf;
}

// q = 1: the unit ball of L_1(S, X) is the closed hull of weighted deltas.
template <BochnerOperator Op>
NormEstimate extreme_point_search(const Op& op, Real p, const SearchBudget& budget,
                                  std::uint64_t seed) {
  NormEstimate best{0.0, Samples::Zero(op.domain().dim(), op.domain().points()), true};
  for (Eigen::Index s = 0; s < op.domain().points(); ++s) {
    Rng rng = make_rng(seed, 0x51u + static_cast<std::uint64_t>(s));
    const ColumnSearch col = column_search(delta_columns(op, s, false), op.codomain(),
                                           op.domain().target, p, budget, rng);
    best.exact = best.exact && col.exact;
    if (col.value > best.value) {
      best.value = col.value;
      best.witness = delta(op.domain(), s, col.direction);
    }
  }
  if (best.value > 0.0) best.value = ratio(op, best.witness, 1.0, p);
  return best;
}

// p = inf: ||K||_{q -> inf} = ||K*||_{1 -> q'}; the witness is rebuilt in the
// primal space from the norming functional of the best adjoint column.
template <BochnerOperator Op>
NormEstimate adjoint_extreme_point_search(const Op& op, Real q, const SearchBudget& budget,
                                          std::uint64_t seed) {
  const Real qc = exponent::conjugate(q);
  const BochnerSpace dual_domain = op.domain().dual();
  const BochnerSpace dual_codomain = op.codomain().dual();
  NormEstimate best{0.0, Samples::Zero(op.domain().dim(), op.domain().points()), true};
  Real best_column = 0.0;
  CVector best_z;
  for (Eigen::Index t = 0; t < op.codomain().points(); ++t) {
    Rng rng = make_rng(seed, 0xA5u + static_cast<std::uint64_t>(t));
    const CMatrix cols = delta_columns(op, t, true);
    const ColumnSearch col =
        column_search(cols, dual_domain, dual_codomain.target, qc, budget, rng);
    best.exact = best.exact && col.exact;
    if (col.value > best_column) {
      best_column = col.value;
      best_z = cols * col.direction;
    }
  }
  if (best_column == 0.0) return best;
  Samples f = lp_duality_map(dual_domain.measure.weights(), dual_domain.target,
                             as_samples(best_z, dual_domain.dim(), dual_domain.points()), qc);
  best.value = ratio(op, f, q, kInf);
  best.witness = f / lp_norm(op.domain().measure.weights(), op.domain().target, f, q);
  return best;
}

template <BochnerOperator Op>
NormEstimate power_iteration(const Op& op, Real q, Real p, const SearchBudget& budget,
                             std::uint64_t seed) {
  const BochnerSpace& dom = op.domain();
  const BochnerSpace& cod = op.codomain();
  const NormedSpace source_dual = dom.target.dual();
  const Real qc = exponent::conjugate(q);

  NormEstimate best{0.0, Samples::Zero(dom.dim(), dom.points()), false};
  for (int restart = 0; restart < budget.restarts; ++restart) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(restart) + 1);
    Samples f = complex_gaussian(rng, dom.dim(), dom.points());
    Real previous = 0.0;
    for (int it = 0; it < budget.iterations; ++it) {
      const Real nf = lp_norm(dom.measure.weights(), dom.target, f, q);
      if (nf == 0.0) break;
      f /= nf;
      const Samples g = op.apply(f);
      const Real value = lp_norm(cod.measure.weights(), cod.target, g, p);
      if (!std::isfinite(value)) throw Error("iteration diverged");
      if (value > best.value) {
        best.value = value;
        best.witness = f;
      }
      if (value == 0.0) break;
      if (it > 0 && value - previous <= budget.tolerance * value) break;
      previous = value;
      const Samples h = lp_duality_map(cod.measure.weights(), cod.target, g, p);
      const Samples z = op.apply_adjoint(h);
      if (z.cwiseAbs().maxCoeff() == 0.0) break;
      f = lp_duality_map(dom.measure.weights(), source_dual, z, qc);
    }
  }
  return best;
}

}  // namespace detail

/// Certified lower bound on ||K||_{L_q(S,X) -> L_p(T,Y)}.
///
/// Interior exponents use the generalized power iteration
///   f <- normalize(J_q'(K* J_p(K f)))
/// from `restarts` seeded random starts; every iterate is a witness and the
/// iteration is monotone, so the result never decreases with more restarts
/// or iterations. The q = 1 endpoint searches weighted deltas directly and
/// p = inf goes through the adjoint at the q' -> 1 endpoint.
template <BochnerOperator Op>
NormEstimate norm_lower_bound(const Op& op, Real q, Real p, const SearchBudget& budget,
                              std::uint64_t seed) {
  exponent::require_valid(q, "q");
  exponent::require_valid(p, "p");
  if (budget.restarts < 1) throw Error("restarts must be >= 1");
  if (q == 1.0) return detail::extreme_point_search(op, p, budget, seed);
  if (exponent::is_inf(p)) return detail::adjoint_extreme_point_search(op, q, budget, seed);
  return detail::power_iteration(op, q, p, budget, seed);
}

}  // namespace opkernel
