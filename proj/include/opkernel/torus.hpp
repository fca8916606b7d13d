#pragma once

#include <array>
#include <functional>
#include <numbers>

#include "opkernel/bochner.hpp"
#include "opkernel/kernel.hpp"
#include "opkernel/schur.hpp"

namespace opkernel {

/// Periodic grid on [-L/2, L/2)^n with N points per axis (N even).
/// Point j has coordinates x = -L/2 + j h, h = L/N; frequency m has
/// coordinates xi = (2 pi / L)(m - N/2). Both orderings put the most negative
/// value first, so the Nyquist frequency -N pi / L sits on the negative side.
/// Flat indices run with axis 0 fastest.
class TorusGrid {
 public:
  static constexpr int kMaxDims = 3;

  TorusGrid(int dims, Eigen::Index points_per_axis, Real period = 2.0 * std::numbers::pi);

  int dims() const { return dims_; }
  Eigen::Index points_per_axis() const { return n_; }
  Real period() const { return period_; }
  Eigen::Index size() const { return size_; }
  Real spacing() const { return period_ / static_cast<Real>(n_); }
  Real frequency_spacing() const { return 2.0 * std::numbers::pi / period_; }
  Real cell_volume() const { return std::pow(spacing(), dims_); }
  Real frequency_cell_volume() const { return std::pow(frequency_spacing(), dims_); }
  /// Largest |xi| on a coordinate axis.
  Real nyquist() const { return frequency_spacing() * static_cast<Real>(n_ / 2); }

  std::array<Eigen::Index, kMaxDims> multi_index(Eigen::Index flat) const;
  Eigen::Index flat_index(const std::array<Eigen::Index, kMaxDims>& idx) const;

  RVector point(Eigen::Index flat) const;
  RVector frequency(Eigen::Index flat) const;
  /// Euclidean length of every frequency, in flat order.
  RVector frequency_norms() const;

  /// Points with cell-volume weights h^n.
  DiscreteMeasureSpace measure() const;
  /// Frequencies with weights (2 pi / L)^n.
  DiscreteMeasureSpace frequency_measure() const;

  bool operator==(const TorusGrid& other) const;

 private:
  int dims_;
  Eigen::Index n_;
  Real period_;
  Eigen::Index size_;
};

/// The torus whose spatial points are the frequencies of `grid`; symbols
/// m(xi) are functions on it.
TorusGrid frequency_torus(const TorusGrid& grid);

/// Matrix-valued grid function: entry at flat point j is a rows x cols
/// matrix stored column-major in data.col(j).
class MatrixField {
 public:
  MatrixField(TorusGrid grid, Eigen::Index rows, Eigen::Index cols, CMatrix data);

  /// Samples fn at the grid points (on_frequencies = false) or frequencies.
  static MatrixField sample(const TorusGrid& grid, Eigen::Index rows, Eigen::Index cols,
                            const std::function<CMatrix(const RVector&)>& fn,
                            bool on_frequencies);
  /// The same matrix at every point.
  static MatrixField constant(const TorusGrid& grid, const CMatrix& value);

  const TorusGrid& grid() const { return grid_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const CMatrix& data() const { return data_; }

  Eigen::Map<const CMatrix> at(Eigen::Index j) const {
    return Eigen::Map<const CMatrix>(data_.col(j).data(), rows_, cols_);
  }

  /// Pointwise conjugate transpose.
  MatrixField adjoint() const;
  /// Pointwise operator norms for A : x -> y.
  RVector operator_norms(const NormedSpace& x, const NormedSpace& y) const;

 private:
  TorusGrid grid_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  CMatrix data_;
};

/// Unitary transform with cell-volume weights on both sides:
///   (Ff)(xi) = (2 pi)^(-n/2) h^n sum_x f(x) exp(-i <x, xi>).
/// Acts on each coordinate row of `f` independently.
Samples dft_forward(const TorusGrid& grid, const Samples& f);
Samples dft_inverse(const TorusGrid& grid, const Samples& f);

/// (k * f)(x) = sum_y h^n k(x - y) f(y), periodic. Computed spectrally.
Samples convolve(const MatrixField& kernel, const Samples& f);

/// T_m f = F^{-1}[m F f], with m sampled on the frequencies of its grid.
Samples apply_multiplier(const MatrixField& symbol, const Samples& f);

/// The kernel with convolve(symbol_kernel(m), f) == apply_multiplier(m, f),
/// i.e. (2 pi)^(-n/2) F^{-1} m.
MatrixField symbol_kernel(const MatrixField& symbol);

/// Dense OperatorKernel of f -> k * f on the grid measure.
OperatorKernel convolution_kernel(const MatrixField& kernel, const NormedSpace& source,
                                  const NormedSpace& target);

/// T_m as an operator L(grid, X) -> L(grid, Y).
class MultiplierOperator {
 public:
  MultiplierOperator(MatrixField symbol, NormedSpace source, NormedSpace target);

  const BochnerSpace& domain() const { return domain_; }
  const BochnerSpace& codomain() const { return codomain_; }
  const MatrixField& symbol() const { return symbol_; }

  Samples apply(const Samples& f) const { return apply_multiplier(symbol_, f); }
  Samples apply_adjoint(const Samples& h) const { return apply_multiplier(adjoint_, h); }

 private:
  MatrixField symbol_;
  MatrixField adjoint_;
  BochnerSpace domain_;
  BochnerSpace codomain_;
};

/// C1 = sup_{||x|| = 1} ||k(.) x||_{L_theta(Y)} and
/// C2 = sup_{||y*|| = 1} ||k(.)^H y*||_{L_theta(X*)} for a convolution kernel.
SchurConstants convolution_schur_constants(const MatrixField& kernel, const NormedSpace& source,
                                           const NormedSpace& target, Real theta,
                                           const SearchBudget& budget, std::uint64_t seed);

}  // namespace opkernel
