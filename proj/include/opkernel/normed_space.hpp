#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "opkernel/exponent.hpp"
#include "opkernel/types.hpp"

namespace opkernel {

enum class NormKind { Euclidean, Ell1, EllInf, WeightedEllP };

/// Finite-dimensional complex coordinate space C^dim with a norm from the
/// weighted l_p family:
///   p in [1, inf):  ||x|| = (sum_i w_i |x_i|^p)^(1/p)
///   p = inf:        ||x|| = max_i w_i |x_i|
/// Euclidean, l1 and l_inf are the unit-weight members and keep their own
/// kind tag. Vectors are paired with the dual by <u, v> = u^H v.
class NormedSpace {
 public:
  static NormedSpace euclidean(Eigen::Index dim);
  static NormedSpace ell1(Eigen::Index dim);
  static NormedSpace ellinf(Eigen::Index dim);
  static NormedSpace weighted(Real p, RVector weights);

  Eigen::Index dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  Real p() const { return p_; }
  const RVector& weights() const { return weights_; }
  bool unit_weights() const { return (weights_.array() == 1.0).all(); }

  /// The dual norm on C^dim under the pairing u^H v. dual().dual() == *this.
  NormedSpace dual() const;

  template <typename Derived>
  Real norm(const Eigen::MatrixBase<Derived>& v) const {
    using std::abs;
    if (exponent::is_inf(p_)) {
      Real m = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, weights_(i) * abs(v(i)));
      return m;
    }
    if (p_ == 1.0) {
      Real s = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) s += weights_(i) * abs(v(i));
      return s;
    }
    if (p_ == 2.0 && kind_ == NormKind::Euclidean) return v.norm();
    Real scale = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) scale = std::max(scale, abs(v(i)));
    if (scale == 0.0) return 0.0;
    Real s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      s += weights_(i) * std::pow(abs(v(i)) / scale, p_);
    return scale * std::pow(s, 1.0 / p_);
  }

  /// Pointwise norms of the columns of `values`.
  RVector column_norms(const Samples& values) const;

  /// Unit vector u of the dual space with u^H v = ||v||. Non-smooth norms
  /// break ties deterministically: zero coordinates map to zero under l1,
  /// and the first maximizing index wins under l_inf.
  /// Throws Error("no norming functional selected") for v = 0.
  CVector duality_map(const CVector& v) const;

  std::string label() const;

  bool operator==(const NormedSpace& other) const;

 private:
  NormedSpace(Eigen::Index dim, NormKind kind, Real p, RVector weights);

  Eigen::Index dim_;
  NormKind kind_;
  Real p_;
  RVector weights_;
};

/// Norm of the identity map between two spaces of the same dimension.
Real identity_norm(const NormedSpace& from, const NormedSpace& to);

struct OperatorNorm {
  Real value = 0.0;
  bool exact = false;  ///< value is the operator norm, otherwise an upper bound
};

/// Operator norm of A : X -> Y (A has dim Y rows, dim X columns). Exact when
/// X is l1-type, Y is l_inf-type, or both are weighted euclidean; otherwise
/// the smallest of several sound upper bounds.
OperatorNorm operator_norm(const CMatrix& a, const NormedSpace& x, const NormedSpace& y);

}  // namespace opkernel
