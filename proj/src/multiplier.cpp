#include "opkernel/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "opkernel/dyadic.hpp"

namespace opkernel {

namespace {

void require_fm_region(Real u, Real p, Real q) {
  if (!(u >= 1.0 && u <= 2.0)) throw Error("Fourier type u must lie in [1, 2]");
  exponent::require_valid(p, "p");
  exponent::require_valid(q, "q");
  const Real gap = exponent::reciprocal(q) - exponent::reciprocal(p);
  if (gap < -1e-12 || gap > exponent::reciprocal(u) + 1e-12)
    throw Error("outside admissible region: need 0 <= 1/q - 1/p <= 1/u");
}

void require_shape(const Symbol& m, const TorusGrid& grid, const NormedSpace& source,
                   const NormedSpace& target) {
  if (m.dims() != grid.dims()) throw Error("symbol and grid dimensions differ");
  if (m.rows() != target.dim() || m.cols() != source.dim())
    throw Error("symbol shape does not match the spaces");
}

// The frequency box [-N/2, N/2 - 1] * spacing per axis.
struct Box {
  Real lo;
  Real hi;
  bool contains(const RVector& t, Real margin) const {
    return (t.array() - margin >= lo - 1e-12).all() && (t.array() + margin <= hi + 1e-12).all();
  }
};

Box frequency_box(const TorusGrid& grid) {
  const Real h = grid.frequency_spacing();
  const Real half = static_cast<Real>(grid.points_per_axis() / 2);
  return {-half * h, (half - 1.0) * h};
}

// Widest finite-difference stencil reach for alpha, in units of the step.
int stencil_reach(const MultiIndex& alpha) {
  int reach = 0;
  for (int a : alpha) reach = std::max(reach, stencil_half_width(a));
  return reach;
}

// D^alpha m(t) if it can be evaluated inside the box.
std::optional<CMatrix> evaluate(const Symbol& m, const MultiIndex& alpha, const RVector& t,
                                const Box& box, Real step) {
  if (!box.contains(t, 0.0)) return std::nullopt;
  if (auto exact = m.analytic_derivative(alpha, t)) return exact;
  if (!box.contains(t, stencil_reach(alpha) * step)) return std::nullopt;
  return derivative(m, alpha, t, step);
}

const char* kResolution = "insufficient grid resolution";

}  // namespace

int mikhlin_order(int dims, Real u, Real p, Real q) {
  return static_cast<int>(std::ceil(mu_smoothness(dims, u, p, q) - 1e-12)) + 1;
}

int lemma36_order(int dims, Real u, Real p, Real q) {
  return static_cast<int>(std::floor(mu_smoothness(dims, u, p, q) + 1e-12)) + 1;
}

MultiplierReport mikhlin_check(const Symbol& m, const TorusGrid& grid, Real u, Real p, Real q,
                               const NormedSpace& source, const NormedSpace& target) {
  require_fm_region(u, p, q);
  require_shape(m, grid, source, target);
  MultiplierReport rep;
  rep.condition = "mikhlin";
  rep.derivative_order = mikhlin_order(grid.dims(), u, p, q);
  rep.order_constants.assign(rep.derivative_order + 1, 0.0);
  const Box box = frequency_box(grid);
  const Real step = grid.frequency_spacing();
  for (const MultiIndex& alpha : multi_indices(grid.dims(), rep.derivative_order)) {
    const int k = order(alpha);
    Eigen::Index used = 0;
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      const RVector t = grid.frequency(j);
      const auto d = evaluate(m, alpha, t, box, step);
      if (!d) {
        ++rep.skipped_points;
        continue;
      }
      ++used;
      const Real v = std::pow(1.0 + t.norm(), k) * operator_norm(*d, source, target).value;
      rep.order_constants[k] = std::max(rep.order_constants[k], v);
    }
    if (used == 0) throw Error(kResolution);
  }
  rep.constant_a = *std::max_element(rep.order_constants.begin(), rep.order_constants.end());
  rep.admissible = std::isfinite(rep.constant_a);
  return rep;
}

MultiplierReport lemma36_check(const Symbol& m, const TorusGrid& grid, Real u, Real p, Real q,
                               Real theta, const NormedSpace& source, const NormedSpace& target,
                               int refinement) {
  require_fm_region(u, p, q);
  require_shape(m, grid, source, target);
  exponent::require_valid(theta, "theta");
  if (theta < u) throw Error("theta must lie in [u, inf]");
  if (refinement < 1) throw Error("refinement must be positive");

  MultiplierReport rep;
  rep.condition = "lemma36";
  rep.derivative_order = lemma36_order(grid.dims(), u, p, q);
  rep.order_constants.assign(rep.derivative_order + 1, 0.0);
  const Box box = frequency_box(grid);
  const Real step = grid.frequency_spacing();
  const Real cell = step / refinement;
  const int n = grid.dims();
  const int k_max = build_partition(grid).k_max();
  const auto alphas = multi_indices(n, rep.derivative_order);

  // Midpoints of the cells tiling [-radius, radius]^n that fall in the shell.
  const auto shell = [&](Real inner, Real outer) {
    const auto per_axis = static_cast<Eigen::Index>(std::llround(2.0 * outer / cell));
    Eigen::Index total = 1;
    for (int a = 0; a < n; ++a) total *= per_axis;
    std::vector<RVector> pts;
    for (Eigen::Index flat = 0; flat < total; ++flat) {
      RVector t(n);
      Eigen::Index rest = flat;
      for (int a = 0; a < n; ++a) {
        t(a) = -outer + (static_cast<Real>(rest % per_axis) + 0.5) * cell;
        rest /= per_axis;
      }
      const Real r = t.norm();
      if (r >= inner && r <= outer) pts.push_back(t);
    }
    return pts;
  };
  const Real volume = std::pow(cell, n);

  // max over alpha of ||D^alpha m(scale .)||_{L_theta(points)}
  const auto region_constant = [&](const std::vector<RVector>& pts, Real scale) {
    Real best = 0.0;
    bool any = false;
    for (const MultiIndex& alpha : alphas) {
      const int k = order(alpha);
      const Real chain = std::pow(scale, k);
      Real acc = 0.0;
      for (const RVector& t : pts) {
        const auto d = evaluate(m, alpha, RVector(scale * t), box, step);
        if (!d) {
          ++rep.skipped_points;
          continue;
        }
        any = true;
        const Real v = chain * operator_norm(*d, source, target).value;
        acc = exponent::is_inf(theta) ? std::max(acc, v) : acc + volume * std::pow(v, theta);
      }
      const Real norm = exponent::is_inf(theta) ? acc : std::pow(acc, 1.0 / theta);
      rep.order_constants[k] = std::max(rep.order_constants[k], norm);
      best = std::max(best, norm);
    }
    if (!any) throw Error(kResolution);
    return best;
  };

  rep.growth.push_back(region_constant(shell(0.0, 2.0), 1.0));
  const std::vector<RVector> annulus = shell(1.0, 4.0);
  for (int k = 1; k <= k_max; ++k) rep.growth.push_back(region_constant(annulus, std::ldexp(1.0, k - 1)));
  rep.constant_a = *std::max_element(rep.growth.begin(), rep.growth.end());
  rep.admissible = std::isfinite(rep.constant_a);
  return rep;
}

MultiplierReport remark38c_check(const Symbol& m, const TorusGrid& grid, Real p, Real q,
                                 const NormedSpace& source, const NormedSpace& target) {
  if (grid.dims() != 1) throw Error("hilbert-space check needs n = 1");
  if (source.kind() != NormKind::Euclidean || target.kind() != NormKind::Euclidean)
    throw Error("hilbert-space check needs euclidean spaces");
  exponent::require_valid(p, "p");
  exponent::require_valid(q, "q");
  if (std::abs(exponent::reciprocal(q) - exponent::reciprocal(p) - 0.5) > 1e-12)
    throw Error("exponent relation violated: need 1/q - 1/p = 1/2");
  MultiplierReport rep = mikhlin_check(m, grid, 2.0, p, q, source, target);
  rep.condition = "remark38c";
  return rep;
}

FmReport verify_fm_lq_lp(const Symbol& m, const TorusGrid& grid, Real u, Real q, Real p,
                         const NormedSpace& source, const NormedSpace& target,
                         const SearchBudget& budget, std::uint64_t seed) {
  require_fm_region(u, p, q);
  require_shape(m, grid, source, target);
  const MultiplierOperator op(m.sample(grid), source, target);
  NormEstimate est = norm_lower_bound(op, q, p, budget, seed);
  FmReport rep;
  rep.lower = est.value;
  rep.witness = std::move(est.witness);
  rep.theory = mu_estimate(m, grid, u, p, q, source, target);
  rep.ratio = slack_ratio(rep.lower, rep.theory);
  return rep;
}

Real besov_gain(const MultiplierOperator& op, const Samples& f, Real s, Real q, Real p, Real r,
                const DyadicPartition& partition) {
  const Real nf = besov_norm(f, op.domain().target, BesovParams::checked(s, q, r), partition);
  if (nf == 0.0) return 0.0;
  return besov_norm(op.apply(f), op.codomain().target, BesovParams::checked(s, p, r), partition) / nf;
}

FmReport verify_fm_besov(const Symbol& m, const TorusGrid& grid, Real u, Real q, Real p, Real s,
                         Real r, const NormedSpace& source, const NormedSpace& target,
                         const SearchBudget& budget, std::uint64_t seed) {
  require_fm_region(u, p, q);
  require_shape(m, grid, source, target);
  BesovParams::checked(s, q, r);
  BesovParams::checked(s, p, r);
  const DyadicPartition partition = build_partition(grid);
  const MultiplierOperator op(m.sample(grid), source, target);
  const Eigen::Index dim = source.dim();

  FmReport rep;
  const auto consider = [&](const Samples& f) {
    const Real g = besov_gain(op, f, s, q, p, r, partition);
    if (g > rep.lower || rep.witness.size() == 0) {
      rep.lower = std::max(g, rep.lower);
      rep.witness = f;
    }
  };

  std::vector<CVector> directions;
  for (Eigen::Index i = 0; i < dim; ++i) directions.push_back(CVector::Unit(dim, i));
  Rng rng = make_rng(seed, 0xB5);
  for (int i = 0; dim > 1 && i < budget.restarts; ++i) directions.push_back(random_unit_vector(source, rng));

  // point mass at the origin
  std::array<Eigen::Index, TorusGrid::kMaxDims> centre{};
  centre.fill(grid.points_per_axis() / 2);
  const Eigen::Index origin = grid.flat_index(centre);
  for (const CVector& v : directions) {
    Samples f = Samples::Zero(dim, grid.size());
    f.col(origin) = v / grid.cell_volume();
    consider(f);
  }
  // dyadic blocks of constant spectra and characters at dyadic frequencies
  for (int k = 0; k < partition.blocks(); ++k)
    for (const CVector& v : directions) {
      consider(dft_inverse(grid, v * partition.phi(k).transpose().cast<Complex>()));
      const Real radius = k == 0 ? 0.0 : std::ldexp(1.0, k);
      if (radius > grid.nyquist() - grid.frequency_spacing()) continue;
      Samples chi(dim, grid.size());
      for (Eigen::Index j = 0; j < grid.size(); ++j) chi.col(j) = v * std::polar(1.0, radius * grid.point(j)(0));
      consider(chi);
    }
  // random band-limited functions
  for (int i = 0; i < budget.restarts; ++i) {
    Rng draw = make_rng(seed, static_cast<std::uint64_t>(i) + 1);
    std::uniform_int_distribution<int> pick(0, partition.k_max());
    const int k = pick(draw);
    consider(dft_inverse(grid, complex_gaussian(draw, dim, grid.size()) * partition.phi(k).asDiagonal()));
  }

  for (int k = 0; k < partition.blocks(); ++k) {
    const int k_max = partition.k_max();
    const Symbol block = m.times_radial([k, k_max](Real t) { return dyadic::phi(k, t, k_max); },
                                        "phi" + std::to_string(k));
    rep.block_constants.push_back(mu_estimate(block, grid, u, p, q, source, target));
  }
  rep.theory = *std::max_element(rep.block_constants.begin(), rep.block_constants.end());
  rep.ratio = slack_ratio(rep.lower, rep.theory);
  return rep;
}

}  // namespace opkernel
