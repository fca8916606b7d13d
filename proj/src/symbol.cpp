#include "opkernel/symbol.hpp"

#include "opkernel/dyadic.hpp"

namespace opkernel {

int order(const MultiIndex& alpha) {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

std::vector<MultiIndex> multi_indices(int dims, int max_order) {
  std::vector<MultiIndex> out;
  for (int total = 0; total <= max_order; ++total) {
    MultiIndex alpha{};
    // enumerate compositions of `total` into `dims` parts
    const std::function<void(int, int)> fill = [&](int axis, int left) {
      if (axis == dims - 1) {
        alpha[axis] = left;
        out.push_back(alpha);
        return;
      }
      for (int v = left; v >= 0; --v) {
        alpha[axis] = v;
        fill(axis + 1, left - v);
      }
    };
    fill(0, total);
  }
  return out;
}

Symbol::Symbol(std::string name, int dims, Eigen::Index rows, Eigen::Index cols, Value value,
               Derivative derivative)
    : name_(std::move(name)),
      dims_(dims),
      rows_(rows),
      cols_(cols),
      value_(std::move(value)),
      derivative_(std::move(derivative)) {
  if (dims < 1 || dims > TorusGrid::kMaxDims) throw Error("symbol dimension must lie in [1, 3]");
  if (rows < 1 || cols < 1) throw Error("symbol values must be nonempty matrices");
}

std::optional<CMatrix> Symbol::analytic_derivative(const MultiIndex& alpha, const RVector& t) const {
  if (order(alpha) == 0) return value_(t);
  if (!derivative_) return std::nullopt;
  return derivative_(alpha, t);
}

MatrixField Symbol::sample(const TorusGrid& grid) const {
  if (grid.dims() != dims_) throw Error("symbol and grid dimensions differ");
  return MatrixField::sample(grid, rows_, cols_, value_, true);
}

Symbol Symbol::dilated(Real a) const {
  if (!(a > 0.0)) throw Error("dilation must be positive");
  Derivative d;
  if (derivative_)
    d = [inner = derivative_, a](const MultiIndex& alpha, const RVector& t) -> std::optional<CMatrix> {
      auto v = inner(alpha, RVector(a * t));
      if (v) *v *= std::pow(a, order(alpha));
      return v;
    };
  return {name_, dims_, rows_, cols_,
          [inner = value_, a](const RVector& t) { return inner(RVector(a * t)); }, std::move(d)};
}

Symbol Symbol::times_radial(const std::function<Real(Real)>& profile, const std::string& label) const {
  return {label + "*" + name_, dims_, rows_, cols_,
          [inner = value_, profile](const RVector& t) { return CMatrix(profile(t.norm()) * inner(t)); }};
}

RVector centered_weights(int derivative, int half) {
  const int n = 2 * half + 1;
  std::vector<Real> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - half;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, derivative + 1);
  Real c1 = 1.0, c4 = x[0];
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, derivative);
    Real c2 = 1.0;
    const Real c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const Real c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(derivative);
}

int stencil_half_width(int derivative) { return derivative == 0 ? 0 : (derivative + 1) / 2 + 1; }

CMatrix derivative(const Symbol& m, const MultiIndex& alpha, const RVector& t, Real step) {
  if (auto exact = m.analytic_derivative(alpha, t)) return *exact;
  if (!(step > 0.0)) throw Error("finite-difference step must be positive");
  std::array<RVector, TorusGrid::kMaxDims> w;
  std::array<int, TorusGrid::kMaxDims> half{};
  for (int a = 0; a < m.dims(); ++a) {
    half[a] = stencil_half_width(alpha[a]);
    w[a] = centered_weights(alpha[a], half[a]) / std::pow(step, alpha[a]);
  }
  CMatrix acc = CMatrix::Zero(m.rows(), m.cols());
  std::array<int, TorusGrid::kMaxDims> off{};
  const std::function<void(int, Real, RVector&)> walk = [&](int axis, Real weight, RVector& at) {
    if (axis == m.dims()) {
      if (weight != 0.0) acc += weight * m(at);
      return;
    }
    for (off[axis] = -half[axis]; off[axis] <= half[axis]; ++off[axis]) {
      const Real wi = w[axis](off[axis] + half[axis]);
      at(axis) = t(axis) + off[axis] * step;
      walk(axis + 1, weight * wi, at);
    }
    at(axis) = t(axis);
  };
  RVector at = t;
  walk(0, 1.0, at);
  return acc;
}

namespace symbols {

Symbol identity(int dims, Eigen::Index dim) {
  return {"identity", dims, dim, dim, [dim](const RVector&) { return CMatrix(CMatrix::Identity(dim, dim)); },
          [dim](const MultiIndex&, const RVector&) -> std::optional<CMatrix> {
            return CMatrix(CMatrix::Zero(dim, dim));
          }};
}

Symbol zero(int dims, Eigen::Index rows, Eigen::Index cols) {
  return {"zero", dims, rows, cols, [rows, cols](const RVector&) { return CMatrix(CMatrix::Zero(rows, cols)); },
          [rows, cols](const MultiIndex&, const RVector&) -> std::optional<CMatrix> {
            return CMatrix(CMatrix::Zero(rows, cols));
          }};
}

namespace {

CMatrix scalar(Real v) { return CMatrix::Constant(1, 1, v); }

// D^alpha (1 + |t|^2)^(-1/2) for |alpha| <= 2 in any dimension, and
// |alpha| = 3 on the line.
std::optional<Real> decay_derivative(const MultiIndex& alpha, const RVector& t) {
  const Real s = 1.0 + t.squaredNorm();
  const int k = order(alpha);
  if (k == 1) {
    int i = 0;
    while (alpha[i] == 0) ++i;
    return -t(i) * std::pow(s, -1.5);
  }
  if (k == 2) {
    int i = 0;
    while (alpha[i] == 0) ++i;
    int j = alpha[i] == 2 ? i : i + 1;
    while (alpha[j] == 0) ++j;
    return 3.0 * t(i) * t(j) * std::pow(s, -2.5) - (i == j ? std::pow(s, -1.5) : 0.0);
  }
  if (k == 3 && t.size() == 1) return (9.0 * t(0) - 6.0 * std::pow(t(0), 3)) * std::pow(s, -3.5);
  return std::nullopt;
}

}  // namespace

Symbol scalar_decay(int dims) {
  return {"scalar-decay", dims, 1, 1,
          [](const RVector& t) { return scalar(1.0 / std::sqrt(1.0 + t.squaredNorm())); },
          [](const MultiIndex& alpha, const RVector& t) -> std::optional<CMatrix> {
            if (auto v = decay_derivative(alpha, t)) return scalar(*v);
            return std::nullopt;
          }};
}

Symbol diag_decay() {
  return {"diag-decay", 1, 2, 2,
          [](const RVector& t) {
            const Real s = 1.0 + t(0) * t(0);
            CMatrix m = CMatrix::Zero(2, 2);
            m(0, 0) = 1.0 / std::sqrt(s);
            m(1, 1) = 1.0 / s;
            return m;
          },
          [](const MultiIndex& alpha, const RVector& t) -> std::optional<CMatrix> {
            const Real x = t(0), s = 1.0 + x * x;
            const auto first = decay_derivative(alpha, t);
            if (!first || alpha[0] > 2) return std::nullopt;
            CMatrix m = CMatrix::Zero(2, 2);
            m(0, 0) = *first;
            m(1, 1) = alpha[0] == 1 ? -2.0 * x / (s * s) : (6.0 * x * x - 2.0) / (s * s * s);
            return m;
          }};
}

Symbol block(int k, int k_max, int dims) {
  return {"block" + std::to_string(k), dims, 1, 1,
          [k, k_max](const RVector& t) { return scalar(dyadic::phi(k, t.norm(), k_max)); }};
}

}  // namespace symbols

}  // namespace opkernel
