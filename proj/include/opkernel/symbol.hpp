#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opkernel/torus.hpp"

namespace opkernel {

using MultiIndex = std::array<int, TorusGrid::kMaxDims>;

int order(const MultiIndex& alpha);

/// All multi-indices in `dims` variables with |alpha| <= max_order, by order.
std::vector<MultiIndex> multi_indices(int dims, int max_order);

/// A matrix-valued function m : R^n -> C^{rows x cols}, optionally with
/// analytic partial derivatives. `derivative` returns nullopt for orders it
/// does not know; those fall back to finite differences.
class Symbol {
 public:
  using Value = std::function<CMatrix(const RVector&)>;
  using Derivative = std::function<std::optional<CMatrix>(const MultiIndex&, const RVector&)>;

  Symbol(std::string name, int dims, Eigen::Index rows, Eigen::Index cols, Value value,
         Derivative derivative = {});

  const std::string& name() const { return name_; }
  int dims() const { return dims_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  CMatrix operator()(const RVector& t) const { return value_(t); }
  std::optional<CMatrix> analytic_derivative(const MultiIndex& alpha, const RVector& t) const;

  /// Samples on the frequencies of `grid`.
  MatrixField sample(const TorusGrid& grid) const;

  /// t -> m(a t); derivatives pick up a^|alpha|.
  Symbol dilated(Real a) const;
  /// t -> profile(|t|) m(t); derivatives are left to finite differences.
  Symbol times_radial(const std::function<Real(Real)>& profile, const std::string& label) const;

 private:
  std::string name_;
  int dims_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  Value value_;
  Derivative derivative_;
};

/// Centered finite-difference weights for the `derivative`-th derivative on
/// the offsets -half..half (Fornberg's recursion).
RVector centered_weights(int derivative, int half);

/// Half-width of the 4th-order centered stencil for a given derivative order.
int stencil_half_width(int derivative);

/// D^alpha m(t): the analytic closure when available, otherwise a 4th-order
/// centered tensor-product finite difference with the given step.
CMatrix derivative(const Symbol& m, const MultiIndex& alpha, const RVector& t, Real step);

namespace symbols {

Symbol identity(int dims, Eigen::Index dim);
Symbol zero(int dims, Eigen::Index rows, Eigen::Index cols);
/// (1 + |t|^2)^(-1/2), scalar.
Symbol scalar_decay(int dims);
/// diag((1 + t^2)^(-1/2), (1 + t^2)^(-1)), n = 1.
Symbol diag_decay();
/// phi_k(|t|) for the partition truncated at k_max, scalar.
Symbol block(int k, int k_max, int dims);

}  // namespace symbols

}  // namespace opkernel
