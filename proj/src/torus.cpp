#include "opkernel/torus.hpp"

#include <unsupported/Eigen/FFT>
#include <vector>

namespace opkernel {

TorusGrid::TorusGrid(int dims, Eigen::Index points_per_axis, Real period)
    : dims_(dims), n_(points_per_axis), period_(period), size_(1) {
  if (dims < 1 || dims > kMaxDims) throw Error("torus dimension must lie in [1, 3]");
  if (points_per_axis < 2 || points_per_axis % 2 != 0)
    throw Error("points per axis must be even and at least 2");
  if (!(period > 0.0) || !std::isfinite(period)) throw Error("period must be positive");
  for (int a = 0; a < dims; ++a) size_ *= n_;
}

std::array<Eigen::Index, TorusGrid::kMaxDims> TorusGrid::multi_index(Eigen::Index flat) const {
  std::array<Eigen::Index, kMaxDims> idx{};
  for (int a = 0; a < dims_; ++a) {
    idx[a] = flat % n_;
    flat /= n_;
  }
  return idx;
}

Eigen::Index TorusGrid::flat_index(const std::array<Eigen::Index, kMaxDims>& idx) const {
  Eigen::Index flat = 0;
  for (int a = dims_ - 1; a >= 0; --a) flat = flat * n_ + ((idx[a] % n_) + n_) % n_;
  return flat;
}

RVector TorusGrid::point(Eigen::Index flat) const {
  const auto idx = multi_index(flat);
  RVector x(dims_);
  for (int a = 0; a < dims_; ++a) x(a) = -0.5 * period_ + static_cast<Real>(idx[a]) * spacing();
  return x;
}

RVector TorusGrid::frequency(Eigen::Index flat) const {
  const auto idx = multi_index(flat);
  RVector xi(dims_);
  for (int a = 0; a < dims_; ++a)
    xi(a) = frequency_spacing() * static_cast<Real>(idx[a] - n_ / 2);
  return xi;
}

RVector TorusGrid::frequency_norms() const {
  RVector r(size_);
  for (Eigen::Index j = 0; j < size_; ++j) r(j) = frequency(j).norm();
  return r;
}

DiscreteMeasureSpace TorusGrid::measure() const {
  return DiscreteMeasureSpace::uniform(size_, cell_volume());
}

DiscreteMeasureSpace TorusGrid::frequency_measure() const {
  return DiscreteMeasureSpace::uniform(size_, frequency_cell_volume());
}

bool TorusGrid::operator==(const TorusGrid& other) const {
  return dims_ == other.dims_ && n_ == other.n_ && period_ == other.period_;
}

TorusGrid frequency_torus(const TorusGrid& grid) {
  return TorusGrid(grid.dims(), grid.points_per_axis(),
                   grid.frequency_spacing() * static_cast<Real>(grid.points_per_axis()));
}

MatrixField::MatrixField(TorusGrid grid, Eigen::Index rows, Eigen::Index cols, CMatrix data)
    : grid_(grid), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 1 || cols < 1) throw Error("matrix field entries must be nonempty");
  if (data_.rows() != rows * cols || data_.cols() != grid_.size())
    throw Error("matrix field shape does not match its grid");
}

MatrixField MatrixField::sample(const TorusGrid& grid, Eigen::Index rows, Eigen::Index cols,
                                const std::function<CMatrix(const RVector&)>& fn,
                                bool on_frequencies) {
  CMatrix data(rows * cols, grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const CMatrix v = fn(on_frequencies ? grid.frequency(j) : grid.point(j));
    if (v.rows() != rows || v.cols() != cols) throw Error("sampled entry has the wrong shape");
    data.col(j) = Eigen::Map<const CVector>(v.data(), v.size());
  }
  return {grid, rows, cols, std::move(data)};
}

MatrixField MatrixField::constant(const TorusGrid& grid, const CMatrix& value) {
  const CVector flat = Eigen::Map<const CVector>(value.data(), value.size());
  return {grid, value.rows(), value.cols(), flat.replicate(1, grid.size())};
}

MatrixField MatrixField::adjoint() const {
  CMatrix out(data_.rows(), data_.cols());
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    const CMatrix a = at(j).adjoint();
    out.col(j) = Eigen::Map<const CVector>(a.data(), a.size());
  }
  return {grid_, cols_, rows_, std::move(out)};
}

RVector MatrixField::operator_norms(const NormedSpace& x, const NormedSpace& y) const {
  RVector r(data_.cols());
  for (Eigen::Index j = 0; j < data_.cols(); ++j) r(j) = operator_norm(at(j), x, y).value;
  return r;
}

namespace {

// Unnormalized DFT along every axis of each row: sign -1 forward, +1 inverse.
void fft_all_axes(const TorusGrid& grid, CMatrix& data, bool inverse) {
  Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::Unscaled);
  const Eigen::Index n = grid.points_per_axis();
  std::vector<Complex> in(n), out(n);
  Eigen::Index stride = 1;
  for (int a = 0; a < grid.dims(); ++a) {
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
      for (Eigen::Index start = 0; start < grid.size(); ++start) {
        if ((start / stride) % n != 0) continue;
        for (Eigen::Index j = 0; j < n; ++j) in[j] = data(r, start + j * stride);
        if (inverse)
          fft.inv(out, in);
        else
          fft.fwd(out, in);
        for (Eigen::Index j = 0; j < n; ++j) data(r, start + j * stride) = out[j];
      }
    }
    stride *= n;
  }
}

// (-1)^(sum of indices), optionally shifted by N/2 per axis.
RVector checkerboard(const TorusGrid& grid, bool centered) {
  RVector s(grid.size());
  const Eigen::Index shift = centered ? grid.points_per_axis() / 2 : 0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const auto idx = grid.multi_index(j);
    Eigen::Index total = 0;
    for (int a = 0; a < grid.dims(); ++a) total += idx[a] + shift;
    s(j) = total % 2 == 0 ? 1.0 : -1.0;
  }
  return s;
}

void require_shape(const TorusGrid& grid, const Samples& f) {
  if (f.cols() != grid.size()) throw Error("sample count does not match the grid");
}

}  // namespace

Samples dft_forward(const TorusGrid& grid, const Samples& f) {
  require_shape(grid, f);
  const Real scale = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dims()) * grid.cell_volume();
  Samples data = f * checkerboard(grid, false).asDiagonal();
  fft_all_axes(grid, data, false);
  return data * (scale * checkerboard(grid, true)).asDiagonal();
}

Samples dft_inverse(const TorusGrid& grid, const Samples& f) {
  require_shape(grid, f);
  const Real scale =
      std::pow(2.0 * std::numbers::pi, -0.5 * grid.dims()) * grid.frequency_cell_volume();
  Samples data = f * checkerboard(grid, true).asDiagonal();
  fft_all_axes(grid, data, true);
  return data * (scale * checkerboard(grid, false)).asDiagonal();
}

Samples convolve(const MatrixField& kernel, const Samples& f) {
  const TorusGrid& grid = kernel.grid();
  require_shape(grid, f);
  if (f.rows() != kernel.cols()) throw Error("kernel and function dimensions differ");
  // Move the kernel origin (index N/2 on every axis) to index 0 and use the
  // plain circular convolution theorem.
  const Eigen::Index half = grid.points_per_axis() / 2;
  CMatrix k(kernel.data().rows(), grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    auto idx = grid.multi_index(j);
    for (int a = 0; a < grid.dims(); ++a) idx[a] += half;
    k.col(j) = kernel.data().col(grid.flat_index(idx));
  }
  fft_all_axes(grid, k, false);
  Samples ff = f;
  fft_all_axes(grid, ff, false);
  Samples out = Samples::Zero(kernel.rows(), grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Eigen::Map<const CMatrix> kj(k.col(j).data(), kernel.rows(), kernel.cols());
    out.col(j) = kj * ff.col(j);
  }
  fft_all_axes(grid, out, true);
  return out * (grid.cell_volume() / static_cast<Real>(grid.size()));
}

Samples apply_multiplier(const MatrixField& symbol, const Samples& f) {
  const TorusGrid& grid = symbol.grid();
  require_shape(grid, f);
  if (f.rows() != symbol.cols()) throw Error("symbol and function dimensions differ");
  const Samples ff = dft_forward(grid, f);
  Samples g(symbol.rows(), grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) g.col(j) = symbol.at(j) * ff.col(j);
  return dft_inverse(grid, g);
}

MatrixField symbol_kernel(const MatrixField& symbol) {
  const TorusGrid& grid = symbol.grid();
  const Real scale = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dims());
  return {grid, symbol.rows(), symbol.cols(), scale * dft_inverse(grid, symbol.data())};
}

OperatorKernel convolution_kernel(const MatrixField& kernel, const NormedSpace& source,
                                  const NormedSpace& target) {
  const TorusGrid& grid = kernel.grid();
  if (kernel.rows() != target.dim() || kernel.cols() != source.dim())
    throw Error("kernel shape does not match the spaces");
  const Eigen::Index half = grid.points_per_axis() / 2;
  return OperatorKernel::from_function(
      grid.measure(), grid.measure(), source, target, [&](Eigen::Index t, Eigen::Index s) {
        auto it = grid.multi_index(t);
        const auto is = grid.multi_index(s);
        for (int a = 0; a < grid.dims(); ++a) it[a] = it[a] - is[a] + half;
        return CMatrix(kernel.at(grid.flat_index(it)));
      });
}

MultiplierOperator::MultiplierOperator(MatrixField symbol, NormedSpace source, NormedSpace target)
    : symbol_(std::move(symbol)),
      adjoint_(symbol_.adjoint()),
      domain_{symbol_.grid().measure(), std::move(source)},
      codomain_{symbol_.grid().measure(), std::move(target)} {
  if (symbol_.rows() != codomain_.dim() || symbol_.cols() != domain_.dim())
    throw Error("symbol shape does not match the spaces");
}

SchurConstants convolution_schur_constants(const MatrixField& kernel, const NormedSpace& source,
                                           const NormedSpace& target, Real theta,
                                           const SearchBudget& budget, std::uint64_t seed) {
  if (kernel.rows() != target.dim() || kernel.cols() != source.dim())
    throw Error("kernel shape does not match the spaces");
  // A one-point domain turns sup_x ||k(.) x||_{L_theta} into schur_c1.
  const auto column = [&](const MatrixField& field, const NormedSpace& x, const NormedSpace& y) {
    return OperatorKernel::from_function(
        DiscreteMeasureSpace::counting(1), field.grid().measure(), x, y,
        [&](Eigen::Index t, Eigen::Index) { return CMatrix(field.at(t)); });
  };
  SchurConstants c;
  c.theta = theta;
  c.c1 = schur_c1(column(kernel, source, target), theta, budget, seed);
  c.c2 = schur_c1(column(kernel.adjoint(), target.dual(), source.dual()), theta, budget,
                  derive_seed(seed, 0xC2));
  return c;
}

}  // namespace opkernel
