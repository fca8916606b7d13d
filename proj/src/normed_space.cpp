#include "opkernel/normed_space.hpp"

#include <sstream>

namespace opkernel {

namespace {

Complex phase(Complex z) {
  const Real a = std::abs(z);
  return a == 0.0 ? Complex(0.0) : z / a;
}

// Norm of diag(b) : l_p -> l_r (unit weights, b >= 0).
Real diagonal_norm(const RVector& b, Real p, Real r) {
  if (p <= r) return b.maxCoeff();
  const Real inv_s = exponent::reciprocal(r) - exponent::reciprocal(p);
  const Real s = 1.0 / inv_s;
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) acc += std::pow(b(i), s);
  return std::pow(acc, inv_s);
}

// Coordinate scaling that maps the weighted norm onto the plain l_p norm:
// ||x||_{p,w} = ||diag(c) x||_p.
RVector coordinate_scale(const NormedSpace& x) {
  if (exponent::is_inf(x.p())) return x.weights();
  return x.weights().array().pow(1.0 / x.p());
}

}  // namespace

NormedSpace::NormedSpace(Eigen::Index dim, NormKind kind, Real p, RVector weights)
    : dim_(dim), kind_(kind), p_(p), weights_(std::move(weights)) {
  if (dim_ < 1) throw Error("normed space dimension must be >= 1");
  exponent::require_valid(p_, "norm exponent");
  if (weights_.size() != dim_) throw Error("norm weights must match the dimension");
  for (Eigen::Index i = 0; i < dim_; ++i)
    if (!(weights_(i) > 0.0) || !std::isfinite(weights_(i)))
      throw Error("norm weights must be finite and strictly positive");
}

NormedSpace NormedSpace::euclidean(Eigen::Index dim) {
  return {dim, NormKind::Euclidean, 2.0, RVector::Ones(std::max<Eigen::Index>(dim, 0))};
}
NormedSpace NormedSpace::ell1(Eigen::Index dim) {
  return {dim, NormKind::Ell1, 1.0, RVector::Ones(std::max<Eigen::Index>(dim, 0))};
}
NormedSpace NormedSpace::ellinf(Eigen::Index dim) {
  return {dim, NormKind::EllInf, kInf, RVector::Ones(std::max<Eigen::Index>(dim, 0))};
}
NormedSpace NormedSpace::weighted(Real p, RVector weights) {
  const auto dim = weights.size();
  return {dim, NormKind::WeightedEllP, p, std::move(weights)};
}

NormedSpace NormedSpace::dual() const {
  const auto flipped_kind = [&](NormKind k) {
    switch (k) {
      case NormKind::Ell1: return NormKind::EllInf;
      case NormKind::EllInf: return NormKind::Ell1;
      default: return k;
    }
  };
  if (p_ == 1.0 || exponent::is_inf(p_)) {
    RVector w = weights_.cwiseInverse();
    return {dim_, flipped_kind(kind_), exponent::conjugate(p_), std::move(w)};
  }
  const Real pc = exponent::conjugate(p_);
  RVector w = unit_weights() ? weights_ : RVector(weights_.array().pow(1.0 - pc));
  return {dim_, kind_, pc, std::move(w)};
}

RVector NormedSpace::column_norms(const Samples& values) const {
  RVector out(values.cols());
  for (Eigen::Index s = 0; s < values.cols(); ++s) out(s) = norm(values.col(s));
  return out;
}

CVector NormedSpace::duality_map(const CVector& v) const {
  if (v.size() != dim_) throw Error("duality map: dimension mismatch");
  if (v.cwiseAbs().maxCoeff() == 0.0) throw Error("no norming functional selected");
  CVector u = CVector::Zero(dim_);
  if (p_ == 1.0) {
    for (Eigen::Index i = 0; i < dim_; ++i) u(i) = weights_(i) * phase(v(i));
    return u;
  }
  if (exponent::is_inf(p_)) {
    Eigen::Index best = 0;
    Real best_val = -1.0;
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const Real val = weights_(i) * std::abs(v(i));
      if (val > best_val) {
        best_val = val;
        best = i;
      }
    }
    u(best) = weights_(best) * phase(v(best));
    return u;
  }
  const Real nv = norm(v);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    const Real a = std::abs(v(i));
    if (a == 0.0) continue;
    u(i) = weights_(i) * std::pow(a / nv, p_ - 1.0) * phase(v(i));
  }
  return u;
}

std::string NormedSpace::label() const {
  std::ostringstream os;
  switch (kind_) {
    case NormKind::Euclidean: os << "euclidean"; break;
    case NormKind::Ell1: os << "ell1"; break;
    case NormKind::EllInf: os << "ellinf"; break;
    case NormKind::WeightedEllP: os << "weighted-ellp(p=" << p_ << ")"; break;
  }
  os << "[" << dim_ << "]";
  return os.str();
}

bool NormedSpace::operator==(const NormedSpace& other) const {
  if (dim_ != other.dim_ || kind_ != other.kind_) return false;
  if (p_ != other.p_ && std::abs(p_ - other.p_) > 1e-12 * std::max(1.0, std::abs(p_))) return false;
  return weights_.isApprox(other.weights_, 1e-12);
}

Real identity_norm(const NormedSpace& from, const NormedSpace& to) {
  if (from.dim() != to.dim()) throw Error("identity_norm: dimension mismatch");
  const RVector b = coordinate_scale(to).cwiseQuotient(coordinate_scale(from));
  return diagonal_norm(b, from.p(), to.p());
}

OperatorNorm operator_norm(const CMatrix& a, const NormedSpace& x, const NormedSpace& y) {
  if (a.rows() != y.dim() || a.cols() != x.dim()) throw Error("operator_norm: shape mismatch");
  if (a.cwiseAbs().maxCoeff() == 0.0) return {0.0, true};

  const NormedSpace x_dual = x.dual();

  // Extreme points of the complex l1 ball are phase multiples of basis vectors.
  if (x.p() == 1.0 || x.dim() == 1) {
    Real best = 0.0;
    for (Eigen::Index j = 0; j < x.dim(); ++j)
      best = std::max(best, y.norm(a.col(j)) / x.norm(CVector::Unit(x.dim(), j)));
    return {best, true};
  }
  // Row functionals against the dual norm.
  if (exponent::is_inf(y.p()) || y.dim() == 1) {
    Real best = 0.0;
    for (Eigen::Index i = 0; i < y.dim(); ++i)
      best = std::max(best, y.norm(CVector::Unit(y.dim(), i)) * x_dual.norm(a.row(i).transpose()));
    return {best, true};
  }
  if (x.p() == 2.0 && y.p() == 2.0) {
    const CMatrix scaled = y.weights().cwiseSqrt().asDiagonal() * a *
                           x.weights().cwiseSqrt().cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<CMatrix> svd(scaled);
    return {svd.singularValues()(0), true};
  }

  Real by_columns = 0.0;
  for (Eigen::Index j = 0; j < x.dim(); ++j)
    by_columns += y.norm(a.col(j)) * x_dual.norm(CVector::Unit(x.dim(), j));
  Real by_rows = 0.0;
  const CMatrix ah = a.adjoint();
  for (Eigen::Index i = 0; i < y.dim(); ++i)
    by_rows += x_dual.norm(ah.col(i)) * y.norm(CVector::Unit(y.dim(), i));
  Eigen::JacobiSVD<CMatrix> svd(a);
  const Real by_spectral = identity_norm(x, NormedSpace::euclidean(x.dim())) *
                           svd.singularValues()(0) *
                           identity_norm(NormedSpace::euclidean(y.dim()), y);
  return {std::min({by_columns, by_rows, by_spectral}), false};
}

}  // namespace opkernel
